from __future__ import annotations

import pytest

from qgk import bilform
from qgk.bilform import AugBilinearMap
from qgk.graphs import (
    ForbiddenWitness,
    complete_graph,
    cycle_graph,
    decompose,
    enumerate_graphs,
    find_forbidden,
    graph_bilinear,
    path_graph,
)
from qgk.slot import (
    SizeGuardError,
    extract_witness,
    has_common_slot,
    has_common_slot_naive,
    is_quaternionic,
    pair_subspaces,
    path_quadruple,
    verify_witness,
)


def test_l3_fails_with_verified_witness():
    M = graph_bilinear(path_graph(4), 2)
    for res in (has_common_slot(M), has_common_slot_naive(M)):
        assert res is not True
        assert verify_witness(M, res)


def test_c4_fails_k3_holds():
    assert has_common_slot(graph_bilinear(cycle_graph(4), 2)) is not True
    assert has_common_slot(graph_bilinear(complete_graph(3), 2)) is True
    assert has_common_slot(AugBilinearMap.zero(2, 3, 2)) is True


def test_path_quadruple_for_every_forbidden_graph():
    seen = 0
    for n in range(4, 7):
        for g in enumerate_graphs(n, up_to_iso=True):
            fw = find_forbidden(g)
            if fw is None:
                continue
            M = graph_bilinear(g, 2)
            q = path_quadruple(n, fw)
            assert M.value(q.v, q.u) == M.value(q.v2, q.u2)
            assert verify_witness(M, q)
            seen += 1
    assert seen == 124


def test_naive_is_first_lexicographic():
    M = graph_bilinear(path_graph(4), 2)
    w = has_common_slot_naive(M)
    # nothing lexicographically smaller in (v, u) fails: recheck by brute force
    from qgk.fpla import all_vectors

    vs = list(all_vectors(2, 4))
    first = None
    for v in vs:
        for u in vs:
            val = M.value(v, u)
            for v2 in vs:
                for u2 in vs:
                    if M.value(v2, u2) != val:
                        continue
                    if not any(M.value(v, x) == val and M.value(v2, x) == val for x in vs):
                        first = (v, u, v2, u2)
                        break
                if first:
                    break
            if first:
                break
        if first:
            break
    assert w.vectors() == first


def test_d_inside_i(rng):
    for _ in range(100):
        M = bilform.random_valid_map(rng, rng.choice((2, 3)), rng.randint(1, 3), rng.randint(1, 3))
        from qgk.fpla import all_vectors, rank_rows

        vs = list(all_vectors(M.p, M.n))
        v, v2 = rng.choice(vs), rng.choice(vs)
        Ib, Db = pair_subspaces(M, v, v2)
        assert rank_rows(M.p, Ib + Db, M.m) == len(Ib)


def test_extract_witness_on_l3_pair():
    M = graph_bilinear(path_graph(4), 2)
    w = extract_witness(M, (0, 1, 1, 0), (1, 1, 1, 1))
    assert verify_witness(M, w)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_deciders_agree_on_random_maps(rng, p):
    for _ in range(60):
        n = rng.randint(1, 3 if p < 5 else 2)
        M = bilform.random_valid_map(rng, p, n, rng.randint(0, 3))
        a, b = has_common_slot(M), has_common_slot_naive(M)
        assert (a is True) == (b is True)
        for w in (a, b):
            if w is not True:
                assert verify_witness(M, w)


def test_threads_do_not_change_result():
    for g in enumerate_graphs(6, up_to_iso=True):
        M = graph_bilinear(g, 2)
        assert has_common_slot(M, threads=1) == has_common_slot(M, threads=4)


def test_guards():
    with pytest.raises(SizeGuardError):
        has_common_slot_naive(AugBilinearMap.zero(2, 13, 1))
    with pytest.raises(SizeGuardError):
        has_common_slot(AugBilinearMap.zero(3, 9, 1))


def test_quaternionic_report():
    rep = is_quaternionic(graph_bilinear(path_graph(4), 2))
    assert rep.failed() == [4]
    assert is_quaternionic(graph_bilinear(complete_graph(3), 2)).passed
    with pytest.raises(ValueError):
        is_quaternionic(graph_bilinear(path_graph(2), 3))


def test_equivalence_small_labeled():
    for n in range(1, 5):
        for g in enumerate_graphs(n):
            slot = has_common_slot(graph_bilinear(g, 2)) is True
            assert slot == (find_forbidden(g) is None) == (not isinstance(decompose(g), ForbiddenWitness))
