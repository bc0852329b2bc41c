from __future__ import annotations

import random

import pytest

from qgk import bilform
from qgk.bilform import AugBilinearMap, Morphism, ViolationKind
from qgk.fpla import FpMat
from qgk.graphs import complete_graph, graph_bilinear, path_graph


def test_graph_map_is_valid_with_edge_values():
    M = graph_bilinear(path_graph(3), 3)
    assert bilform.is_valid(M)
    assert M.value((1, 0, 0), (0, 1, 0)) == (1, 0)
    assert M.value((0, 1, 0), (1, 0, 0)) == (2, 0)
    assert M.value((0, 0, 1), (0, 1, 0)) == (0, 2)


def test_not_skew_is_reported_with_reproducing_witness():
    M = AugBilinearMap.build(3, 2, 1, [[(0,), (1,)], [(1,), (0,)]])
    viol = bilform.validate(M)
    kinds = {v.kind for v in viol}
    assert ViolationKind.NOT_SKEW in kinds and ViolationKind.AXIOM_I in kinds
    for v in viol:
        assert v.reproduces(M)


def test_eps_nonzero_at_odd_prime():
    M = AugBilinearMap.build(3, 1, 0, [[()]], [1])
    viol = bilform.validate(M)
    assert [v.kind for v in viol] == [ViolationKind.EPS_ORDER]


def test_p2_diagonal_must_match_eps():
    # eps = 0 forces b(v, v) = 0
    M = AugBilinearMap.build(2, 1, 1, [[(1,)]])
    viol = bilform.validate(M)
    assert [v.kind for v in viol] == [ViolationKind.AXIOM_I]
    assert viol[0].reproduces(M)
    assert bilform.is_valid(AugBilinearMap.build(2, 1, 1, [[(1,)]], [1]))


def test_malformed():
    M = AugBilinearMap(2, 1, 1, (((2,),),), (0,))
    assert bilform.validate(M)[0].kind is ViolationKind.MALFORMED


def test_validate_agrees_with_exhaustive(rng):
    for _ in range(300):
        p = rng.choice((2, 3))
        n, m = rng.randint(0, 3), rng.randint(0, 2)
        gram = [[tuple(rng.randrange(p) for _ in range(m)) for _ in range(n)] for _ in range(n)]
        eps = [rng.randrange(p) for _ in range(n)] if rng.random() < 0.5 else None
        M = AugBilinearMap.build(p, n, m, gram, eps)
        ex = bilform.exhaustive_axioms(M)
        assert bilform.is_valid(M) == (ex["axiom_i"] and ex["eps_order"])


def test_random_generators_valid(rng):
    for _ in range(200):
        p = rng.choice((2, 3, 5))
        M = bilform.random_valid_map(rng, p, rng.randint(0, 4), rng.randint(0, 3))
        assert all(bilform.exhaustive_axioms(M).values())
    # nonzero eps actually occurs at p = 2
    eps_seen = {bilform.random_valid_map(rng, 2, 3, 1).eps for _ in range(60)}
    assert len(eps_seen) > 2


def test_text_round_trip(rng):
    for _ in range(50):
        M = bilform.random_valid_map(rng, rng.choice((2, 3)), rng.randint(0, 3), rng.randint(0, 2))
        assert bilform.equal(bilform.loads(bilform.dumps(M)), M)


@pytest.mark.parametrize(
    "text, line",
    [
        ("p 4\ndimV 0\ndimW 0\neps\n", 1),
        ("p 2\ndimV 1\ndimW 1\neps 0\nb 1 1 0\nb 1 1 0\n", 6),
        ("p 2\ndimV 1\ndimW 1\neps 0\nb 1 2 0\n", 5),
    ],
)
def test_loads_errors_carry_line(text, line):
    with pytest.raises(bilform.BilinearFormatError) as exc:
        bilform.loads(text)
    assert exc.value.line == line


def test_loads_missing_entry():
    with pytest.raises(bilform.BilinearFormatError):
        bilform.loads("p 2\ndimV 2\ndimW 0\neps 0 0\nb 1 1\nb 1 2\nb 2 1\n")


def test_morphism_identity_and_compose():
    M = graph_bilinear(complete_graph(3), 2)
    idm = bilform.identity_morphism(M)
    assert idm.is_morphism()
    assert bilform.check_monomorphism(idm.compose(idm))


def test_morphism_detects_bad_f2():
    M = graph_bilinear(complete_graph(2), 3)
    bad = Morphism(FpMat.identity(3, 2), FpMat.from_rows(3, [[2]]), M, M)
    assert not bad.is_morphism()
    with pytest.raises(bilform.MorphismError):
        bilform.check_monomorphism(bad)


def test_free_product_and_eps_restriction():
    A = graph_bilinear(complete_graph(2), 2)
    B = graph_bilinear(path_graph(1), 2)
    F = bilform.free_product(A, B)
    assert (F.n, F.m) == (3, 1) and bilform.is_valid(F)
    with pytest.raises(bilform.UnsupportedAmalgamation):
        bilform.free_product(AugBilinearMap.build(2, 1, 1, [[(1,)]], [1]), B)


def test_change_basis_preserves_validity_and_moves_eps(rng):
    M = AugBilinearMap.build(2, 2, 1, [[(1,), (1,)], [(1,), (1,)]], [1, 0])
    assert bilform.is_valid(M)
    P = [[1, 1], [0, 1]]  # new basis: e1, e1+e2
    N = bilform.change_basis(M, P)
    assert bilform.is_valid(N)
    assert N.eps == (1, 0)
    assert N.gram[1][1] == M.value((1, 1), (1, 1))


def test_permuted_equal_signed():
    g = path_graph(3)
    B = graph_bilinear(g, 3)
    sigma = [2, 1, 0]
    R = bilform.reorder(B, sigma)
    assert bilform.permuted_equal(B, R, [2, 1, 0]) or bilform.permuted_equal(R, B, [2, 1, 0])
    assert not bilform.permuted_equal(B, graph_bilinear(complete_graph(3), 3), [0, 1, 2])


def test_surjectivity():
    assert bilform.is_surjective(graph_bilinear(path_graph(4), 2))
    assert not bilform.is_surjective(AugBilinearMap.zero(2, 2, 1))
