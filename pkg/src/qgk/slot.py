"""The common slot property of a bilinear map, decided two ways.

``has_common_slot_naive`` follows the definition: every quadruple
(v, u, v', u') with b(v, u) = b(v', u') must admit u'' with
b(v, u'') = b(v, u) and b(v', u'') = b(v', u').

``has_common_slot`` uses the fact that the quadruple condition only depends
on the common value w.  With L_v = b(v, .), a pair (v, v') is fine iff every
w in I = Im L_v ∩ Im L_v' lies in D = L_v(ker(L_v - L_v')).  Since D ⊆ I,
this is a dimension comparison, done by the pair-scan kernels.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import fpla, kernels
from .bilform import AugBilinearMap, Violation, ViolationKind, validate
from .graphs import ForbiddenWitness

NAIVE_LIMIT = 2**12
PAIR_LIMIT = 2**16


class SizeGuardError(ValueError):
    pass


@dataclass(frozen=True)
class SlotWitness:
    v: tuple[int, ...]
    u: tuple[int, ...]
    v2: tuple[int, ...]
    u2: tuple[int, ...]

    def vectors(self):
        return self.v, self.u, self.v2, self.u2

    def __str__(self) -> str:
        fmt = lambda x: "(" + " ".join(map(str, x)) + ")"  # noqa: E731
        return f"v={fmt(self.v)} u={fmt(self.u)} v'={fmt(self.v2)} u'={fmt(self.u2)}"


def _index_to_vec(idx: int, p: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = idx % p
        idx //= p
    return tuple(out)


def _codes(M: AugBilinearMap) -> np.ndarray:
    """Table of b over all of V with each W-value encoded as one integer."""
    T = M.table()
    weights = np.array([M.p ** (M.m - 1 - k) for k in range(M.m)], dtype=np.int64)
    return T @ weights if M.m else np.zeros(T.shape[:2], dtype=np.int64)


def verify_witness(M: AugBilinearMap, w: SlotWitness) -> bool:
    """Equal values and, by exhaustive search over u'', no common slot."""
    val = M.value(w.v, w.u)
    if val != M.value(w.v2, w.u2):
        return False
    for u3 in fpla.all_vectors(M.p, M.n):
        if M.value(w.v, u3) == val and M.value(w.v2, u3) == val:
            return False
    return True


def has_common_slot_naive(M: AugBilinearMap) -> bool | SlotWitness:
    """Direct search; returns True or the lexicographically first failing quadruple."""
    p, n = M.p, M.n
    N = p**n
    if N > NAIVE_LIMIT:
        raise SizeGuardError(f"p^n = {N} exceeds the naive search limit {NAIVE_LIMIT}")
    C = _codes(M)
    keys, inv = np.unique(C, return_inverse=True)
    C = inv.reshape(N, N)
    K = len(keys)
    present = np.zeros((N, K), dtype=bool)
    present[np.repeat(np.arange(N), N), C.ravel()] = True
    for a in range(N):
        Ca = C[a]
        same = C == Ca[None, :]
        common = np.zeros((N, K), dtype=bool)
        rows, cols = np.nonzero(same)
        common[rows, Ca[cols]] = True
        bad = present[a][None, :] & present & ~common
        if not bad.any():
            continue
        bad_any = bad.any(axis=0)
        u = int(np.nonzero(bad_any[Ca])[0][0])
        val = Ca[u]
        c = int(np.nonzero(bad[:, val])[0][0])
        u2 = int(np.nonzero(C[c] == val)[0][0])
        return SlotWitness(*(_index_to_vec(x, p, n) for x in (a, u, c, u2)))
    return True


def _threads() -> int:
    env = os.environ.get("QGK_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def find_failing_pair(M: AugBilinearMap, backend: str | None = None, threads: int | None = None):
    """First (v, v') index pair violating the rank identity, or None."""
    p, n = M.p, M.n
    N = p**n
    if N * N > PAIR_LIMIT:
        raise SizeGuardError(f"p^(2n) = {N * N} exceeds the pair-scan limit {PAIR_LIMIT}")
    if M.m == 0 or n == 0:
        return None
    threads = threads or _threads()
    if threads <= 1 or N < 64:
        return kernels.slot_scan(p, n, M.m, M.gram, 0, N, backend)
    # the inner loop runs over w > v, so equal-width v chunks are unbalanced; that
    # only affects speed, and the ordered merge keeps the result deterministic
    bounds = np.linspace(0, N, 4 * threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as ex:
        results = ex.map(
            lambda lh: kernels.slot_scan(p, n, M.m, M.gram, int(lh[0]), int(lh[1]), backend),
            zip(bounds[:-1], bounds[1:]),
        )
        for r in results:
            if r is not None:
                return r
    return None


def pair_subspaces(M: AugBilinearMap, v, v2) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Echelon bases of I = Im L_v ∩ Im L_v' and D = L_v(ker(L_v - L_v'))."""
    p, n, m = M.p, M.n, M.m
    A = M.left_matrix_rows(v)
    B = M.left_matrix_rows(v2)
    # L_v x = L_v' y  <=>  (x, y) in ker [L_v | -L_v']
    stacked = [a + [(-c) % p for c in b] for a, b in zip(A, B)]
    I = fpla.RowSpace(p, m)
    for xy in fpla.kernel_rows(p, stacked, 2 * n):
        I.add(_apply(A, xy[:n], p))
    D = fpla.RowSpace(p, m)
    diff = [[(a - b) % p for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]
    for k in fpla.kernel_rows(p, diff, n):
        D.add(_apply(A, k, p))
    return I.basis(), D.basis()


def _apply(rows, x, p):
    return tuple(sum(a * b for a, b in zip(r, x)) % p for r in rows)


def extract_witness(M: AugBilinearMap, v, v2) -> SlotWitness:
    p, n, m = M.p, M.n, M.m
    Ibasis, Dbasis = pair_subspaces(M, v, v2)
    assert len(Dbasis) <= len(Ibasis)
    D = fpla.RowSpace(p, m)
    for d in Dbasis:
        D.add(d)
    for d in Dbasis:
        assert fpla.rank_rows(p, Ibasis + [d], m) == len(Ibasis), "D must lie inside I"
    w = next(x for x in fpla.span_elements(p, Ibasis, m) if not D.contains(x))
    u = fpla.solve_rows(p, M.left_matrix_rows(v), n, w)
    u2 = fpla.solve_rows(p, M.left_matrix_rows(v2), n, w)
    assert u is not None and u2 is not None
    return SlotWitness(tuple(v), u, tuple(v2), u2)


def has_common_slot(M: AugBilinearMap, backend: str | None = None, threads: int | None = None) -> bool | SlotWitness:
    pair = find_failing_pair(M, backend, threads)
    if pair is None:
        return True
    v, v2 = (_index_to_vec(x, M.p, M.n) for x in pair)
    return extract_witness(M, v, v2)


def path_quadruple(n: int, fw: ForbiddenWitness) -> SlotWitness:
    """The violating quadruple attached to an induced path a-b-c-d (or circle)."""
    a, b, c, d = fw.vertices

    def vec(*verts):
        return tuple(1 if i + 1 in verts else 0 for i in range(n))

    return SlotWitness(vec(b, c), vec(a, b), vec(a, b, c, d), vec(b))


# -- quaternionic axioms --------------------------------------------------

@dataclass(frozen=True)
class AxiomResult:
    passed: bool
    method: str
    witness: tuple | None = None


@dataclass(frozen=True)
class QuaternionicReport:
    axioms: dict[int, AxiomResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.axioms.values())

    def failed(self) -> list[int]:
        return [k for k, r in sorted(self.axioms.items()) if not r.passed]


EXHAUSTIVE_TRIPLES = 2**18


def is_quaternionic(M: AugBilinearMap) -> QuaternionicReport:
    """Marshall's axioms for ``q = b`` on G = V (additive), -1 = eps, Q = image of b."""
    if M.p != 2:
        raise ValueError("quaternionic maps are defined for exponent-2 groups (p = 2)")
    n = M.n
    out: dict[int, AxiomResult] = {}

    viol = validate(M)
    if any(x.kind is ViolationKind.MALFORMED for x in viol):
        raise ValueError(viol[0].message)
    ax1 = next((x for x in viol if x.kind is ViolationKind.AXIOM_I), None)
    out[1] = AxiomResult(ax1 is None, "basis reduction", ax1.witness if ax1 else None)

    N = 2**n
    if N**3 <= EXHAUSTIVE_TRIPLES:
        C = _codes(M)
        zero = C[0, 0]
        witness = None
        for a in range(N):
            row = C[a]
            eq = row[:, None] == row[None, :]
            b_idx, c_idx = np.nonzero(eq)
            bad = row[b_idx ^ c_idx] != zero  # index XOR is vector addition over F_2
            if bad.any():
                k = int(np.nonzero(bad)[0][0])
                witness = tuple(_index_to_vec(x, 2, n) for x in (a, int(b_idx[k]), int(c_idx[k])))
                break
        out[2] = AxiomResult(witness is None, "exhaustive", witness)
    else:
        out[2] = AxiomResult(True, "bilinearity")

    sym = next(((i, j) for i in range(n) for j in range(i + 1, n) if M.gram[i][j] != M.gram[j][i]), None)
    out[3] = AxiomResult(sym is None, "gram symmetry", sym)

    slot = has_common_slot(M)
    out[4] = AxiomResult(slot is True, "rank reduction", None if slot is True else slot.vectors())
    return QuaternionicReport(out)


__all__ = [
    "SlotWitness",
    "SizeGuardError",
    "has_common_slot",
    "has_common_slot_naive",
    "verify_witness",
    "path_quadruple",
    "is_quaternionic",
    "QuaternionicReport",
    "Violation",
]
