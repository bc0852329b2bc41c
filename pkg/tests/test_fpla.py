from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgk import fpla
from qgk.fpla import FpMat, FpVec


def brute_rank(p, rows, ncols):
    """Size of the row span by enumerating all combinations."""
    if not rows:
        return 0
    span = set()
    for coefs in itertools.product(range(p), repeat=len(rows)):
        span.add(tuple(sum(c * r[j] for c, r in zip(coefs, rows)) % p for j in range(ncols)))
    k = 0
    while p**k < len(span):
        k += 1
    return k


matrices = st.integers(min_value=0, max_value=3).flatmap(
    lambda p_idx: st.tuples(
        st.just((2, 3, 5, 7)[p_idx]),
        st.integers(1, 4),
        st.integers(1, 4),
    )
).flatmap(
    lambda t: st.tuples(
        st.just(t[0]),
        st.lists(st.lists(st.integers(0, t[0] - 1), min_size=t[2], max_size=t[2]), min_size=t[1], max_size=t[1]),
        st.just(t[2]),
    )
)


def test_check_prime():
    for p in (2, 3, 5, 7):
        assert fpla.check_prime(p) == p
    for bad in (0, 1, 4, 11):
        with pytest.raises(ValueError):
            fpla.check_prime(bad)


def test_vector_arithmetic():
    u = FpVec.of(3, [1, 2, 0])
    v = FpVec.of(3, [2, 2, 1])
    assert (u + v).coords == (0, 1, 1)
    assert (u - v).coords == (2, 0, 2)
    assert (-u).coords == (2, 1, 0)
    assert u.scale(2).coords == (2, 1, 0)
    with pytest.raises(fpla.DimensionError):
        u + FpVec.of(3, [1, 1])


def test_field_inverse():
    F = fpla.PrimeField(7)
    assert all(a * F.inv(a) % 7 == 1 for a in range(1, 7))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rank_matches_brute_force(data):
    p, rows, ncols = data
    assert fpla.rank_rows(p, rows, ncols) == brute_rank(p, rows, ncols)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_kernel_is_kernel_of_right_size(data):
    p, rows, ncols = data
    ker = fpla.kernel_rows(p, rows, ncols)
    A = np.array(rows)
    for k in ker:
        assert not np.any(A @ np.array(k) % p)
    assert len(ker) == ncols - fpla.rank_rows(p, rows, ncols)
    assert fpla.rank_rows(p, ker, ncols) == len(ker)


@settings(max_examples=150, deadline=None)
@given(matrices, st.randoms(use_true_random=False))
def test_solve_consistent_systems(data, r):
    p, rows, ncols = data
    x = [r.randrange(p) for _ in range(ncols)]
    b = [sum(a * c for a, c in zip(row, x)) % p for row in rows]
    sol = fpla.solve_rows(p, rows, ncols, b)
    assert sol is not None
    assert [sum(a * c for a, c in zip(row, sol)) % p for row in rows] == b


def test_solve_inconsistent():
    assert fpla.solve_rows(2, [[1, 1], [1, 1]], 2, [0, 1]) is None
    A = FpMat.from_rows(3, [[1, 0], [2, 0]])
    assert fpla.solve(A, FpVec.of(3, [1, 1])) is None


def test_gf2_packing_round_trip():
    row = (1, 0, 1, 1, 0)
    assert fpla.unpack(fpla.pack(row), 5) == row
    assert fpla.rank_gf2([0b011, 0b110, 0b101]) == 2


def test_matrix_products():
    A = FpMat.from_rows(5, [[1, 2], [3, 4]])
    B = FpMat.from_rows(5, [[0, 1], [1, 0]])
    assert (A @ B).entries == ((2, 1), (4, 3))
    assert fpla.matvec(A, FpVec.of(5, [1, 1])).coords == (3, 2)
    assert A.transpose().entries == ((1, 3), (2, 4))
    assert fpla.rank(FpMat.identity(5, 3)) == 3


def test_affine_intersect():
    # x in (1,0)+span{(0,1)} and x in (0,1)+span{(1,0)} meet at (1,1)
    c1, c2 = FpVec.of(3, [1, 0]), FpVec.of(3, [0, 1])
    pt = fpla.affine_intersect(c1, [FpVec.of(3, [0, 1])], c2, [FpVec.of(3, [1, 0])])
    assert pt is not None and pt.coords == (1, 1)
    # parallel lines never meet
    assert fpla.affine_intersect(c1, [FpVec.of(3, [1, 0])], c2, [FpVec.of(3, [1, 0])]) is None


def test_span_elements_and_rowspace():
    basis = [(1, 0, 1), (0, 1, 1)]
    elems = fpla.span_elements(2, basis, 3)
    assert elems == sorted(elems) and len(elems) == 4
    rs = fpla.RowSpace(3, 3)
    assert rs.add((1, 2, 0)) and rs.add((0, 1, 1))
    assert not rs.add((2, 1, 0))
    assert rs.contains((1, 0, 1)) is ((1, 0, 1) in fpla.span_elements(3, rs.basis(), 3))
    assert len(rs) == 2


def test_all_vectors_lexicographic():
    vs = list(fpla.all_vectors(3, 2))
    assert vs == sorted(vs) and len(vs) == 9 and vs[1] == (0, 1)
