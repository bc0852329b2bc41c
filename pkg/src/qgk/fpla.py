"""Exact linear algebra over small prime fields F_p.

Matrices and vectors are immutable.  Elimination always picks the first
nonzero column, and within it the first available row, so kernel bases and
particular solutions are reproducible.  Over F_2 rows are packed into
Python ints (bit ``j`` is column ``j``) and reduced with XOR.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

SUPPORTED_PRIMES = (2, 3, 5, 7)


class DimensionError(ValueError):
    """Operands have incompatible shapes or fields."""


def check_prime(p: int) -> int:
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"unsupported prime {p!r}; expected one of {SUPPORTED_PRIMES}")
    return p


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self) -> None:
        check_prime(self.p)

    def elements(self) -> range:
        return range(self.p)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)


@dataclass(frozen=True)
class FpVec:
    p: int
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        check_prime(self.p)
        if not isinstance(self.coords, tuple):
            object.__setattr__(self, "coords", tuple(self.coords))
        for c in self.coords:
            if not 0 <= c < self.p:
                raise ValueError(f"coordinate {c} not reduced mod {self.p}")

    @classmethod
    def of(cls, p: int, coords: Iterable[int]) -> FpVec:
        return cls(p, tuple(int(c) % p for c in coords))

    @classmethod
    def zero(cls, p: int, dim: int) -> FpVec:
        return cls(p, (0,) * dim)

    @classmethod
    def unit(cls, p: int, dim: int, i: int) -> FpVec:
        return cls(p, tuple(1 if k == i else 0 for k in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: FpVec) -> FpVec:
        _same(self, other)
        return FpVec(self.p, tuple((a + b) % self.p for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: FpVec) -> FpVec:
        _same(self, other)
        return FpVec(self.p, tuple((a - b) % self.p for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> FpVec:
        return FpVec(self.p, tuple((-a) % self.p for a in self.coords))

    def scale(self, c: int) -> FpVec:
        return FpVec(self.p, tuple((c * a) % self.p for a in self.coords))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> int:
        return self.coords[i]


def _same(u: FpVec, v: FpVec) -> None:
    if u.p != v.p or u.dim != v.dim:
        raise DimensionError(f"vectors differ: (p={u.p}, dim={u.dim}) vs (p={v.p}, dim={v.dim})")


@dataclass(frozen=True)
class FpMat:
    p: int
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        check_prime(self.p)
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError(f"entries do not form a {self.rows}x{self.cols} matrix")
        for r in self.entries:
            for c in r:
                if not 0 <= c < self.p:
                    raise ValueError(f"entry {c} not reduced mod {self.p}")

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[Sequence[int]], cols: int | None = None) -> FpMat:
        ent = tuple(tuple(int(c) % p for c in r) for r in rows)
        if cols is None:
            cols = len(ent[0]) if ent else 0
        return cls(p, len(ent), cols, ent)

    @classmethod
    def from_columns(cls, p: int, columns: Sequence[Sequence[int]], rows: int) -> FpMat:
        cols = list(columns)
        ent = tuple(tuple(int(c[i]) % p for c in cols) for i in range(rows))
        return cls(p, rows, len(cols), ent)

    @classmethod
    def identity(cls, p: int, n: int) -> FpMat:
        return cls(p, n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> FpMat:
        return cls(p, rows, cols, tuple((0,) * cols for _ in range(rows)))

    def column(self, j: int) -> FpVec:
        return FpVec(self.p, tuple(r[j] for r in self.entries))

    def transpose(self) -> FpMat:
        return FpMat(self.p, self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other):
        if isinstance(other, FpVec):
            return matvec(self, other)
        return matmul(self, other)


def matvec(A: FpMat, x: FpVec) -> FpVec:
    if A.p != x.p or A.cols != x.dim:
        raise DimensionError(f"cannot apply {A.rows}x{A.cols} matrix to vector of dim {x.dim}")
    p = A.p
    return FpVec(p, tuple(sum(a * b for a, b in zip(row, x.coords)) % p for row in A.entries))


def matmul(A: FpMat, B: FpMat) -> FpMat:
    if A.p != B.p or A.cols != B.rows:
        raise DimensionError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    p = A.p
    bt = list(zip(*B.entries)) if B.rows else [()] * B.cols
    ent = tuple(tuple(sum(a * b for a, b in zip(row, col)) % p for col in bt) for row in A.entries)
    return FpMat(p, A.rows, B.cols, ent)


# ---------------------------------------------------------------------------
# elimination kernels on raw rows

def pack(row: Sequence[int]) -> int:
    """Pack an F_2 row into an int, bit j holding column j."""
    x = 0
    for j, c in enumerate(row):
        if c & 1:
            x |= 1 << j
    return x


def unpack(x: int, ncols: int) -> tuple[int, ...]:
    return tuple((x >> j) & 1 for j in range(ncols))


def rref_gf2(rows: Iterable[int], ncols: int) -> tuple[list[int], list[int]]:
    work = [r for r in rows if r]
    out: list[int] = []
    pivots: list[int] = []
    for col in range(ncols):
        bit = 1 << col
        for k, r in enumerate(work):
            if r & bit:
                piv = work.pop(k)
                break
        else:
            continue
        work = [r ^ piv if r & bit else r for r in work]
        out = [r ^ piv if r & bit else r for r in out]
        out.append(piv)
        pivots.append(col)
        if not work:
            break
    return out, pivots


def rank_gf2(rows: Iterable[int]) -> int:
    """Rank of packed F_2 rows (column order is irrelevant for the rank)."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = r
                break
            r ^= b
    return len(basis)


def rref_modp(rows: Iterable[Sequence[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    work = [[c % p for c in r] for r in rows]
    work = [r for r in work if any(r)]
    out: list[list[int]] = []
    pivots: list[int] = []
    for col in range(ncols):
        for k, r in enumerate(work):
            if r[col]:
                piv = work.pop(k)
                break
        else:
            continue
        inv = pow(piv[col], p - 2, p)
        piv = [(c * inv) % p for c in piv]

        def elim(r: list[int]) -> list[int]:
            f = r[col]
            if not f:
                return r
            return [(a - f * b) % p for a, b in zip(r, piv)]

        work = [elim(r) for r in work]
        work = [r for r in work if any(r)]
        out = [elim(r) for r in out]
        out.append(piv)
        pivots.append(col)
        if not work:
            break
    return out, pivots


def rref_rows(p: int, rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[tuple[int, ...]], list[int]]:
    """Reduced row echelon form of ``rows``; returns (nonzero rows, pivot columns)."""
    if p == 2:
        red, piv = rref_gf2((pack(r) for r in rows), ncols)
        return [unpack(r, ncols) for r in red], piv
    red, piv = rref_modp(rows, ncols, p)
    return [tuple(r) for r in red], piv


def rank_rows(p: int, rows: Sequence[Sequence[int]], ncols: int) -> int:
    if p == 2:
        return rank_gf2(pack(r) for r in rows)
    return len(rref_modp(rows, ncols, p)[1])


# ---------------------------------------------------------------------------
# public operations

def rank(A: FpMat) -> int:
    return rank_rows(A.p, A.entries, A.cols)


def kernel_rows(p: int, rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    red, pivots = rref_rows(p, rows, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        x = [0] * ncols
        x[f] = 1
        for r, pc in zip(red, pivots):
            if r[f]:
                x[pc] = (-r[f]) % p
        basis.append(tuple(x))
    return basis


def kernel_basis(A: FpMat) -> list[FpVec]:
    """Basis of the null space, one vector per free column in increasing order."""
    return [FpVec(A.p, x) for x in kernel_rows(A.p, A.entries, A.cols)]


def solve_rows(p: int, rows: Sequence[Sequence[int]], ncols: int, b: Sequence[int]) -> tuple[int, ...] | None:
    aug = [tuple(r) + (bi % p,) for r, bi in zip(rows, b)]
    red, pivots = rref_rows(p, aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [0] * ncols
    for r, pc in zip(red, pivots):
        x[pc] = r[ncols]
    return tuple(x)


def solve(A: FpMat, b: FpVec) -> FpVec | None:
    """Some ``x`` with ``A x = b`` (free variables zero), or None if inconsistent."""
    if A.p != b.p or A.rows != b.dim:
        raise DimensionError(f"{A.rows}x{A.cols} system with right-hand side of dim {b.dim}")
    x = solve_rows(A.p, A.entries, A.cols, b.coords)
    return None if x is None else FpVec(A.p, x)


def affine_intersect(c1: FpVec, S1: Sequence[FpVec], c2: FpVec, S2: Sequence[FpVec]) -> FpVec | None:
    """A point of ``(c1 + span S1) ∩ (c2 + span S2)``, or None when disjoint."""
    for v in (c2, *S1, *S2):
        _same(c1, v)
    p, dim = c1.p, c1.dim
    # S1 a - S2 b = c2 - c1
    cols = [s.coords for s in S1] + [(-s).coords for s in S2]
    rows = [tuple(col[i] for col in cols) for i in range(dim)]
    rhs = (c2 - c1).coords
    x = solve_rows(p, rows, len(cols), rhs)
    if x is None:
        return None
    point = list(c1.coords)
    for a, s in zip(x[: len(S1)], S1):
        if a:
            point = [(pt + a * si) % p for pt, si in zip(point, s.coords)]
    return FpVec(p, tuple(point))


def span_elements(p: int, basis: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """All elements of span(basis), sorted lexicographically."""
    pts = set()
    for coeffs in product(range(p), repeat=len(basis)):
        v = [0] * dim
        for c, b in zip(coeffs, basis):
            if c:
                v = [(x + c * y) % p for x, y in zip(v, b)]
        pts.add(tuple(v))
    return sorted(pts)


def all_vectors(p: int, dim: int) -> Iterable[tuple[int, ...]]:
    """All of F_p^dim in lexicographic order (index = big-endian base-p digits)."""
    return product(range(p), repeat=dim)


class RowSpace:
    """Incrementally grown subspace of F_p^dim kept in echelon form."""

    def __init__(self, p: int, dim: int):
        self.p = check_prime(p)
        self.dim = dim
        self._rows: dict[int, object] = {}

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vec: Sequence[int]):
        p = self.p
        if p == 2:
            r = pack(vec)
            while r:
                low = (r & -r).bit_length() - 1
                b = self._rows.get(low)
                if b is None:
                    break
                r ^= b
            return r
        r = [c % p for c in vec]
        for col in range(self.dim):
            f = r[col]
            if f:
                b = self._rows.get(col)
                if b is None:
                    break
                r = [(x - f * y) % p for x, y in zip(r, b)]
        return r

    def add(self, vec: Sequence[int]) -> bool:
        """Insert ``vec``; return True if it enlarged the space."""
        r = self.reduce(vec)
        if self.p == 2:
            if not r:
                return False
            self._rows[(r & -r).bit_length() - 1] = r
            return True
        if not any(r):
            return False
        col = next(i for i, c in enumerate(r) if c)
        inv = pow(r[col], self.p - 2, self.p)
        self._rows[col] = [(c * inv) % self.p for c in r]
        return True

    def contains(self, vec: Sequence[int]) -> bool:
        r = self.reduce(vec)
        return not r if self.p == 2 else not any(r)

    def basis(self) -> list[tuple[int, ...]]:
        """Reduced echelon basis, ordered by pivot column."""
        if self.p == 2:
            rows = [unpack(r, self.dim) for r in self._rows.values()]
        else:
            rows = [tuple(r) for r in self._rows.values()]
        return rref_rows(self.p, rows, self.dim)[0]
