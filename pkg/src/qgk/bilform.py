"""Augmented bilinear maps ``(V, W, b, eps)`` over F_p.

A map is stored by its full Gram table: ``gram[i][j]`` is the coordinate
vector of ``b(v_i, v_j)`` in W.  The axioms are

* ``b(v, eps + v) = 0`` for every ``v``;
* ``2 eps = 0``.

They are checked on the basis only.  For odd p they amount to skew-symmetry
plus ``eps = 0`` (skew implies alternating when 2 is invertible).  For p = 2
skew means symmetric, so ``v -> b(v, v) - b(v, eps)`` is additive and it
suffices that ``b(v_i, v_i) = b(v_i, eps)`` on basis vectors.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from . import fpla
from .fpla import FpMat, FpVec

Vec = tuple[int, ...]


class BilinearFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UnsupportedAmalgamation(ValueError):
    """Free products are only modelled for eps = 0."""


class MorphismError(ValueError):
    pass


@dataclass(frozen=True)
class AugBilinearMap:
    p: int
    n: int
    m: int
    gram: tuple[tuple[Vec, ...], ...]
    eps: Vec
    vlabels: tuple[str, ...] | None = field(default=None, compare=False)
    wlabels: tuple[str, ...] | None = field(default=None, compare=False)

    @classmethod
    def build(cls, p: int, n: int, m: int, gram, eps=None, vlabels=None, wlabels=None) -> AugBilinearMap:
        """Normalise nested sequences into an immutable map (entries reduced mod p)."""
        g = tuple(tuple(tuple(int(c) % p for c in gram[i][j]) for j in range(n)) for i in range(n))
        e = tuple(int(c) % p for c in eps) if eps is not None else (0,) * n
        return cls(
            p, n, m, g, e,
            tuple(vlabels) if vlabels is not None else None,
            tuple(wlabels) if wlabels is not None else None,
        )

    @classmethod
    def zero(cls, p: int, n: int, m: int = 0) -> AugBilinearMap:
        return cls.build(p, n, m, [[(0,) * m] * n] * n)

    # -- evaluation -------------------------------------------------------
    def value(self, v: Sequence[int], u: Sequence[int]) -> Vec:
        """``b(v, u)`` for coordinate vectors v, u."""
        p, m = self.p, self.m
        out = [0] * m
        for i, vi in enumerate(v):
            if not vi:
                continue
            row = self.gram[i]
            for j, uj in enumerate(u):
                c = vi * uj
                if c:
                    w = row[j]
                    for k in range(m):
                        out[k] += c * w[k]
        return tuple(x % p for x in out)

    def __call__(self, v, u) -> FpVec:
        cv = v.coords if isinstance(v, FpVec) else v
        cu = u.coords if isinstance(u, FpVec) else u
        return FpVec(self.p, self.value(cv, cu))

    def left_matrix_rows(self, v: Sequence[int]) -> list[list[int]]:
        """Rows (m x n) of the linear map ``u -> b(v, u)``."""
        p, n, m = self.p, self.n, self.m
        cols = [[0] * m for _ in range(n)]
        for i, vi in enumerate(v):
            if vi:
                row = self.gram[i]
                for j in range(n):
                    w = row[j]
                    cj = cols[j]
                    for k in range(m):
                        cj[k] += vi * w[k]
        return [[cols[j][k] % p for j in range(n)] for k in range(m)]

    def left_matrix(self, v: Sequence[int]) -> FpMat:
        return FpMat.from_rows(self.p, self.left_matrix_rows(v), self.n)

    def tensor_matrix_rows(self) -> list[list[int]]:
        """Rows (m x n^2) of the induced map V⊗V -> W, column index ``i*n + j``."""
        n = self.n
        return [[self.gram[i][j][k] for i in range(n) for j in range(n)] for k in range(self.m)]

    def table(self) -> np.ndarray:
        """Dense array ``T[a, b, k]`` of ``b(x_a, x_b)`` over all of V (lexicographic index)."""
        X = np.array(list(fpla.all_vectors(self.p, self.n)), dtype=np.int64).reshape(self.p**self.n, self.n)
        G = np.array(self.gram, dtype=np.int64).reshape(self.n, self.n, self.m)
        return np.einsum("ai,bj,ijk->abk", X, X, G, optimize=True) % self.p

    def with_labels(self, vlabels=None, wlabels=None) -> AugBilinearMap:
        return AugBilinearMap(
            self.p, self.n, self.m, self.gram, self.eps,
            tuple(vlabels) if vlabels is not None else self.vlabels,
            tuple(wlabels) if wlabels is not None else self.wlabels,
        )


class ViolationKind(enum.Enum):
    NOT_SKEW = "NotSkew"
    EPS_ORDER = "EpsOrder"
    AXIOM_I = "AxiomI"
    MALFORMED = "Malformed"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    witness: tuple
    message: str = ""

    def reproduces(self, M: AugBilinearMap) -> bool:
        """Re-evaluate the witness against ``M``."""
        p = M.p
        if self.kind is ViolationKind.NOT_SKEW:
            i, j = self.witness
            return any((a + b) % p for a, b in zip(M.gram[i][j], M.gram[j][i]))
        if self.kind is ViolationKind.EPS_ORDER:
            return any((2 * c) % p for c in self.witness)
        if self.kind is ViolationKind.AXIOM_I:
            v = self.witness
            ev = tuple((a + b) % p for a, b in zip(M.eps, v))
            return any(M.value(v, ev))
        return True


def _malformed(M: AugBilinearMap) -> str | None:
    try:
        fpla.check_prime(M.p)
    except ValueError as exc:
        return str(exc)
    if M.n < 0 or M.m < 0:
        return "negative dimension"
    if len(M.gram) != M.n or any(len(r) != M.n for r in M.gram):
        return f"Gram table is not {M.n}x{M.n}"
    for r in M.gram:
        for w in r:
            if len(w) != M.m or any(not 0 <= c < M.p for c in w):
                return f"Gram entry {w} is not a reduced vector of length {M.m}"
    if len(M.eps) != M.n or any(not 0 <= c < M.p for c in M.eps):
        return f"eps {M.eps} is not a reduced vector of length {M.n}"
    for labels, size, name in ((M.vlabels, M.n, "vlabels"), (M.wlabels, M.m, "wlabels")):
        if labels is not None and len(labels) != size:
            return f"{name} has {len(labels)} entries, expected {size}"
    return None


def validate(M: AugBilinearMap) -> list[Violation]:
    """Axiom violations of ``M``; empty iff ``M`` is an augmented bilinear map.

    Each kind is reported at most once, with the first witness found.
    """
    msg = _malformed(M)
    if msg is not None:
        return [Violation(ViolationKind.MALFORMED, (), msg)]
    p, n = M.p, M.n
    out: list[Violation] = []
    e = [0] * n

    def unit(i):
        v = list(e)
        v[i] = 1
        return tuple(v)

    def fails_i(v):
        ev = tuple((a + b) % p for a, b in zip(M.eps, v))
        return any(M.value(v, ev))

    axiom_witness = None
    for i in range(n):
        for j in range(i, n):
            if any((a + b) % p for a, b in zip(M.gram[i][j], M.gram[j][i])):
                out.append(Violation(ViolationKind.NOT_SKEW, (i, j), f"b(v{i+1},v{j+1}) != -b(v{j+1},v{i+1})"))
                # the polarisation of b(v, eps+v) at (v_i, v_j) is the skew defect,
                # so one of v_i, v_j, v_i+v_j violates axiom (i)
                if i == j:
                    cands = [unit(i), tuple((-c) % p for c in unit(i))]
                else:
                    cands = [unit(i), unit(j), tuple(a + b for a, b in zip(unit(i), unit(j)))]
                axiom_witness = next((v for v in cands if fails_i(v)), None)
                break
        if out:
            break
    if p != 2 and any(M.eps):
        out.append(Violation(ViolationKind.EPS_ORDER, M.eps, "2*eps != 0"))
    if axiom_witness is None:
        axiom_witness = next((unit(i) for i in range(n) if fails_i(unit(i))), None)
    if axiom_witness is not None:
        out.append(Violation(ViolationKind.AXIOM_I, axiom_witness, "b(v, eps+v) != 0"))
    return out


def is_valid(M: AugBilinearMap) -> bool:
    return not validate(M)


def exhaustive_axioms(M: AugBilinearMap) -> dict[str, bool]:
    """Brute-force check of the axioms and the basic identities over all of V.

    Independent of the basis reduction in :func:`validate`; intended for small n.
    """
    p, n = M.p, M.n
    T = M.table()
    N = p**n
    X = np.array(list(fpla.all_vectors(p, n)), dtype=np.int64).reshape(N, n)
    eps_idx = int(sum(c * p ** (n - 1 - i) for i, c in enumerate(M.eps)))
    shifted = [int(sum(((x + e) % p) * p ** (n - 1 - i) for i, (x, e) in enumerate(zip(row, M.eps)))) for row in X]
    diag = T[np.arange(N), np.arange(N)]
    return {
        "axiom_i": bool(np.all(T[np.arange(N), shifted] == 0)),
        "eps_order": not any((2 * c) % p for c in M.eps),
        "diag_eq_eps": bool(np.array_equal(diag, T[:, eps_idx]) and np.array_equal(diag, T[eps_idx, :])),
        "skew": bool(np.all((T + T.transpose(1, 0, 2)) % p == 0)),
        "eps_zero_if_odd": p == 2 or not any(M.eps),
    }


def is_surjective(M: AugBilinearMap) -> bool:
    if M.m == 0:
        return True
    return fpla.rank_rows(M.p, M.tensor_matrix_rows(), M.n * M.n) == M.m


# -- morphisms ------------------------------------------------------------

@dataclass(frozen=True)
class Morphism:
    """``f1: V -> V'`` and ``f2: W -> W'`` as matrices acting on column vectors."""

    f1: FpMat
    f2: FpMat
    source: AugBilinearMap
    target: AugBilinearMap

    def problems(self) -> list[str]:
        S, T = self.source, self.target
        if (self.f1.rows, self.f1.cols) != (T.n, S.n):
            return [f"f1 has shape {self.f1.rows}x{self.f1.cols}, expected {T.n}x{S.n}"]
        if (self.f2.rows, self.f2.cols) != (T.m, S.m):
            return [f"f2 has shape {self.f2.rows}x{self.f2.cols}, expected {T.m}x{S.m}"]
        out = []
        if fpla.matvec(self.f1, FpVec(S.p, S.eps)).coords != T.eps:
            out.append("f1(eps) != eps'")
        images = [self.f1.column(i).coords for i in range(S.n)]
        for i in range(S.n):
            for j in range(S.n):
                lhs = fpla.matvec(self.f2, FpVec(S.p, S.gram[i][j])).coords
                if lhs != T.value(images[i], images[j]):
                    out.append(f"f2(b(v{i+1},v{j+1})) != b'(f1 v{i+1}, f1 v{j+1})")
                    return out
        return out

    def is_morphism(self) -> bool:
        return not self.problems()

    def compose(self, inner: Morphism) -> Morphism:
        """``self ∘ inner``."""
        return Morphism(self.f1 @ inner.f1, self.f2 @ inner.f2, inner.source, self.target)


def identity_morphism(M: AugBilinearMap) -> Morphism:
    return Morphism(FpMat.identity(M.p, M.n), FpMat.identity(M.p, M.m), M, M)


def check_monomorphism(phi: Morphism) -> bool:
    problems = phi.problems()
    if problems:
        raise MorphismError("; ".join(problems))
    return fpla.rank(phi.f1) == phi.source.n and fpla.rank(phi.f2) == phi.source.m


# -- constructions --------------------------------------------------------

def free_product(M1: AugBilinearMap, M2: AugBilinearMap) -> AugBilinearMap:
    """Block sum with zero cross products."""
    if M1.p != M2.p:
        raise ValueError("maps over different fields")
    if any(M1.eps) or any(M2.eps):
        raise UnsupportedAmalgamation(
            "free product with nonzero eps would need eps1 and eps2 identified; only eps = 0 is supported"
        )
    p, n1, n2, m1, m2 = M1.p, M1.n, M2.n, M1.m, M2.m
    n, m = n1 + n2, m1 + m2
    zero = (0,) * m
    gram = [[zero] * n for _ in range(n)]
    for i in range(n1):
        for j in range(n1):
            gram[i][j] = M1.gram[i][j] + (0,) * m2
    for i in range(n2):
        for j in range(n2):
            gram[n1 + i][n1 + j] = (0,) * m1 + M2.gram[i][j]
    vl = _concat_labels(M1.vlabels, M2.vlabels, n1, n2, "v")
    wl = _concat_labels(M1.wlabels, M2.wlabels, m1, m2, "w")
    return AugBilinearMap.build(p, n, m, gram, (0,) * n, vl, wl)


def _concat_labels(a, b, na, nb, prefix):
    if a is None and b is None:
        return None
    a = a if a is not None else tuple(f"{prefix}{i+1}" for i in range(na))
    b = b if b is not None else tuple(f"{prefix}{na+i+1}" for i in range(nb))
    return tuple(a) + tuple(b)


def change_basis(M: AugBilinearMap, P: Sequence[Sequence[int]]) -> AugBilinearMap:
    """Re-express ``M`` in the V-basis given by the columns of the invertible matrix P."""
    p, n = M.p, M.n
    cols = [tuple(P[i][j] % p for i in range(n)) for j in range(n)]
    if fpla.rank_rows(p, cols, n) != n:
        raise ValueError("change of basis matrix is singular")
    gram = [[M.value(cols[i], cols[j]) for j in range(n)] for i in range(n)]
    eps = fpla.solve_rows(p, [list(r) for r in P], n, M.eps)
    return AugBilinearMap.build(p, n, M.m, gram, eps)


def reorder(M: AugBilinearMap, vorder: Sequence[int], worder: Sequence[int] | None = None,
            wsigns: Sequence[int] | None = None) -> AugBilinearMap:
    """New map whose i-th V-basis vector is old ``vorder[i]`` and whose k-th W coordinate
    is ``wsigns[k] *`` old coordinate ``worder[k]``."""
    p, n, m = M.p, M.n, M.m
    worder = list(worder) if worder is not None else list(range(m))
    wsigns = list(wsigns) if wsigns is not None else [1] * m
    gram = [
        [tuple((s * M.gram[vorder[i]][vorder[j]][k]) % p for k, s in zip(worder, wsigns)) for j in range(n)]
        for i in range(n)
    ]
    eps = [M.eps[vorder[i]] for i in range(n)]
    vl = tuple(M.vlabels[k] for k in vorder) if M.vlabels else None
    wl = tuple(M.wlabels[k] for k in worder) if M.wlabels else None
    return AugBilinearMap.build(p, n, m, gram, eps, vl, wl)


# -- comparison -----------------------------------------------------------

def equal(M1: AugBilinearMap, M2: AugBilinearMap) -> bool:
    return (M1.p, M1.n, M1.m, M1.gram, M1.eps) == (M2.p, M2.n, M2.m, M2.gram, M2.eps)


def _slices(M: AugBilinearMap, order: Sequence[int]) -> list[tuple[int, ...]]:
    n = M.n
    return [
        tuple(M.gram[order[i]][order[j]][k] for i in range(n) for j in range(n))
        for k in range(M.m)
    ]


def permuted_equal(M1: AugBilinearMap, M2: AugBilinearMap, sigma: Sequence[int]) -> bool:
    """Equality after sending V-basis vector i of M1 to vector ``sigma[i]`` of M2.

    On W the induced relabelling is a signed permutation of coordinates: a
    vertex permutation may reverse the orientation of an edge coordinate.
    """
    if (M1.p, M1.n, M1.m) != (M2.p, M2.n, M2.m):
        return False
    n, p = M1.n, M1.p
    if sorted(sigma) != list(range(n)):
        raise ValueError(f"{sigma} is not a permutation of range({n})")
    if any(M1.eps[i] != M2.eps[sigma[i]] for i in range(n)):
        return False
    inv = [0] * n
    for i, s in enumerate(sigma):
        inv[s] = i
    # slice of M2 reindexed so position (i, j) refers to M1's basis order
    s1 = _slices(M1, list(range(n)))
    s2 = _slices(M2, sigma)
    pool: dict[tuple, int] = {}
    for s in s2:
        pool[s] = pool.get(s, 0) + 1
    for s in s1:
        neg = tuple((-c) % p for c in s)
        for cand in (s, neg):
            if pool.get(cand):
                pool[cand] -= 1
                break
        else:
            return False
    return True


# -- text format ----------------------------------------------------------

def dumps(M: AugBilinearMap) -> str:
    lines = [f"p {M.p}", f"dimV {M.n}", f"dimW {M.m}", "eps" + "".join(f" {c}" for c in M.eps)]
    for i in range(M.n):
        for j in range(M.n):
            lines.append(f"b {i+1} {j+1}" + "".join(f" {c}" for c in M.gram[i][j]))
    return "\n".join(lines) + "\n"


def loads(text: str) -> AugBilinearMap:
    """Parse the line-oriented map format; rejects missing or duplicate entries."""
    lines = [(k + 1, ln.split()) for k, ln in enumerate(text.splitlines())]
    lines = [(k, t) for k, t in lines if t and not t[0].startswith("#")]

    def header(idx: int, key: str, count: int | None = 1) -> tuple[int, list[int]]:
        if idx >= len(lines):
            raise BilinearFormatError(f"missing '{key}' line")
        lineno, toks = lines[idx]
        if toks[0] != key:
            raise BilinearFormatError(f"expected '{key}', got '{toks[0]}'", lineno)
        if count is not None and len(toks) != count + 1:
            raise BilinearFormatError(f"'{key}' takes {count} value(s)", lineno)
        try:
            return lineno, [int(t) for t in toks[1:]]
        except ValueError:
            raise BilinearFormatError(f"non-integer value in '{key}' line", lineno) from None

    lp, (p,) = header(0, "p")
    try:
        fpla.check_prime(p)
    except ValueError as exc:
        raise BilinearFormatError(str(exc), lp) from None
    ln, (n,) = header(1, "dimV")
    lm, (m,) = header(2, "dimW")
    if n < 0 or m < 0:
        raise BilinearFormatError("negative dimension", ln if n < 0 else lm)
    le, eps = header(3, "eps", n)
    if any(not 0 <= c < p for c in eps):
        raise BilinearFormatError(f"eps entries must lie in [0, {p})", le)
    gram: list[list[Vec | None]] = [[None] * n for _ in range(n)]
    for lineno, toks in lines[4:]:
        if toks[0] != "b":
            raise BilinearFormatError(f"unexpected '{toks[0]}'", lineno)
        if len(toks) != 3 + m:
            raise BilinearFormatError(f"'b' line needs 2 indices and {m} values", lineno)
        try:
            i, j, *w = (int(t) for t in toks[1:])
        except ValueError:
            raise BilinearFormatError("non-integer value in 'b' line", lineno) from None
        if not (1 <= i <= n and 1 <= j <= n):
            raise BilinearFormatError(f"index ({i}, {j}) out of range 1..{n}", lineno)
        if any(not 0 <= c < p for c in w):
            raise BilinearFormatError(f"values must lie in [0, {p})", lineno)
        if gram[i - 1][j - 1] is not None:
            raise BilinearFormatError(f"duplicate entry b {i} {j}", lineno)
        gram[i - 1][j - 1] = tuple(w)
    for i, j in product(range(n), repeat=2):
        if gram[i][j] is None:
            raise BilinearFormatError(f"missing entry b {i+1} {j+1}")
    return AugBilinearMap.build(p, n, m, gram, eps)


# -- random maps (seeded suites) ------------------------------------------

def random_invertible(rng, p: int, n: int) -> list[list[int]]:
    while True:
        P = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        if fpla.rank_rows(p, P, n) == n:
            return P


def random_skew_map(rng, p: int, n: int, m: int) -> AugBilinearMap:
    """Random skew-symmetric table (symmetric with free diagonal when p = 2); eps = 0."""
    gram = [[(0,) * m for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w = tuple(rng.randrange(p) for _ in range(m))
            gram[i][j] = w
            gram[j][i] = tuple((-c) % p for c in w)
        if p == 2:
            gram[i][i] = tuple(rng.randrange(2) for _ in range(m))
    return AugBilinearMap.build(p, n, m, gram)


def random_valid_map(rng, p: int, n: int, m: int) -> AugBilinearMap:
    """Random augmented map.

    Upper triangle random, skew-completed.  For p = 2 a nonzero eps is first
    placed on the basis vector v_1, where the axioms force b(v_i, v_i) = b(v_i, v_1)
    for i > 1 and leave b(v_1, v_1) free; a random change of basis then moves
    eps to a random nonzero vector.
    """
    M = random_skew_map(rng, p, n, m)
    gram = [list(r) for r in M.gram]
    if p != 2 or n == 0 or rng.randrange(3) == 0:
        if p == 2:
            for i in range(n):
                gram[i][i] = (0,) * m
        return AugBilinearMap.build(p, n, m, gram)
    for i in range(1, n):
        gram[i][i] = gram[i][0]
    eps = (1,) + (0,) * (n - 1)
    return change_basis(AugBilinearMap.build(p, n, m, gram, eps), random_invertible(rng, p, n))
