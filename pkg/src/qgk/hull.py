"""Purely quadratic hulls truncated at low degree.

For an augmented map (V, W, b, eps) the hull is T(V)/I with I generated by
the pure tensors v⊗v' such that b(v, v') = 0.  Tensors in V^{⊗k} use the
flat index ``i_1*n^{k-1} + ... + i_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import fpla
from .bilform import AugBilinearMap, Morphism, check_monomorphism
from .fpla import FpMat

PAIR_GUARD = 2**16
DEGREE_GUARD = 2**14
MAX_DEGREE = 4


class HullGuardError(ValueError):
    pass


def _guard_pairs(M: AugBilinearMap) -> None:
    if M.p ** (2 * M.n) > PAIR_GUARD:
        raise HullGuardError(f"p^(2n) = {M.p ** (2 * M.n)} exceeds {PAIR_GUARD}")


def _tensor(v, u) -> list[int]:
    return [a * b for a in v for b in u]


def _full_kernel_dim(M: AugBilinearMap) -> int:
    n2 = M.n * M.n
    return n2 - (fpla.rank_rows(M.p, M.tensor_matrix_rows(), n2) if M.m else 0)


def pure_kernel_span(M: AugBilinearMap, method: str = "slices") -> list[tuple[int, ...]]:
    """Echelon basis of span{v⊗v' : b(v, v') = 0} inside V⊗V.

    ``method="pairs"`` streams every pair (v, v') through the row reduction.
    ``method="slices"`` uses that for fixed v the admissible v' form ker L_v,
    so the span is the sum of v⊗ker(L_v); only one v per line is needed.
    Both stop early once the span reaches the full kernel of V⊗V -> W,
    which contains it.
    """
    _guard_pairs(M)
    p, n = M.p, M.n
    space = fpla.RowSpace(p, n * n)
    target = _full_kernel_dim(M)
    if method == "pairs":
        for v in fpla.all_vectors(p, n):
            for u in fpla.all_vectors(p, n):
                if not any(M.value(v, u)):
                    space.add(_tensor(v, u))
                    if len(space) == target:
                        return space.basis()
        return space.basis()
    if method != "slices":
        raise ValueError(f"unknown method {method!r}")
    for v in fpla.all_vectors(p, n):
        lead = next((c for c in v if c), 0)
        if lead != 1:
            continue  # scalar multiples give the same slice
        for k in fpla.kernel_rows(p, M.left_matrix_rows(v), n):
            space.add(_tensor(v, k))
        if len(space) == target:
            break
    return space.basis()


@dataclass(frozen=True)
class HullTruncation:
    p: int
    source: AugBilinearMap
    dmax: int
    dims: tuple[int, ...]
    ideal_bases: dict[int, list[tuple[int, ...]]] = field(repr=False)

    def report_line(self) -> str:
        return "hull " + " ".join(map(str, self.dims))


def _ideal_component(p: int, n: int, k: int, I2: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Echelon basis of sum_j V^{⊗j} ⊗ I2 ⊗ V^{⊗(k-2-j)} in V^{⊗k}."""
    space = fpla.RowSpace(p, n**k)
    for j in range(k - 1):
        left, right = n**j, n ** (k - 2 - j)
        for r in I2:
            for a in range(left):
                for c in range(right):
                    vec = [0] * n**k
                    for idx, coef in enumerate(r):
                        if coef:
                            vec[(a * n * n + idx) * right + c] = coef
                    space.add(vec)
    return space.basis()


def hull_dims(M: AugBilinearMap, dmax: int = 3) -> HullTruncation:
    if not 0 <= dmax <= MAX_DEGREE:
        raise HullGuardError(f"dmax must lie in 0..{MAX_DEGREE}")
    if M.n**dmax > DEGREE_GUARD:
        raise HullGuardError(f"n^dmax = {M.n**dmax} exceeds {DEGREE_GUARD}")
    p, n = M.p, M.n
    dims = [1]
    bases: dict[int, list[tuple[int, ...]]] = {}
    if dmax >= 1:
        dims.append(n)
        bases[1] = []
    if dmax >= 2:
        I2 = pure_kernel_span(M)
        bases[2] = I2
        dims.append(n * n - len(I2))
        for k in range(3, dmax + 1):
            bases[k] = _ideal_component(p, n, k, I2)
            dims.append(n**k - len(bases[k]))
    return HullTruncation(p, M, dmax, tuple(dims), bases)


@dataclass(frozen=True)
class HullMap:
    """F(G(M)) together with the comparison to M when it is an isomorphism."""

    map: AugBilinearMap
    iso: Morphism | None
    gap: int  # dim(ker(V⊗V -> W)) - dim(pure span)


def functor_F_of_G(M: AugBilinearMap) -> HullMap:
    p, n = M.p, M.n
    I2 = pure_kernel_span(M)
    red, pivots = fpla.rref_rows(p, I2, n * n)
    pivset = set(pivots)
    free = [c for c in range(n * n) if c not in pivset]
    q = len(free)

    def cls(vec):
        # reduce against the RREF rows; what remains on the free columns is the class
        vec = list(vec)
        for r, pc in zip(red, pivots):
            f = vec[pc]
            if f:
                vec = [(a - f * b) % p for a, b in zip(vec, r)]
        return tuple(vec[c] for c in free)

    gram = [[cls([1 if t == i * n + j else 0 for t in range(n * n)]) for j in range(n)] for i in range(n)]
    H = AugBilinearMap.build(p, n, q, gram, M.eps, M.vlabels, [f"[{c // n + 1}⊗{c % n + 1}]" for c in free])
    gap = _full_kernel_dim(M) - len(I2)
    iso = None
    if gap == 0 and q == M.m:
        # class of e_i⊗e_j maps to b(e_i, e_j); free columns are themselves tensors e_i⊗e_j
        f2_cols = [M.gram[c // n][c % n] for c in free]
        f2 = FpMat.from_columns(p, f2_cols, M.m)
        phi = Morphism(FpMat.identity(p, n), f2, H, M)
        if check_monomorphism(phi):
            iso = phi
    return HullMap(H, iso, gap)
