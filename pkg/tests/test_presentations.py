from __future__ import annotations

from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgk import bilform
from qgk.graphs import enumerate_graphs, graph_bilinear
from qgk.presentations import (
    CupProductError,
    FrattiniError,
    NormalFormS3,
    PresentationError,
    collect_by_swaps,
    collect_mod_s3,
    commutator,
    inverse,
    magnus_degree2,
    parse_presentation,
    power,
    presentation_cup_product,
    raag_presentation,
    raag_text,
    reduce_word,
)

N = 3
letters = st.tuples(st.integers(1, N), st.integers(-3, 3).filter(bool))
words = st.lists(letters, max_size=8).map(tuple)
primes = st.sampled_from([2, 3, 5])


@settings(max_examples=300, deadline=None)
@given(words, primes)
def test_two_collectors_agree(w, p):
    assert collect_mod_s3(w, N, p) == collect_by_swaps(w, N, p)


@settings(max_examples=300, deadline=None)
@given(words, primes)
def test_magnus_identities(w, p):
    nf = collect_mod_s3(w, N, p)
    lin, quad = magnus_degree2(w, N, p)
    assert lin == nf.c
    for i in range(N):
        assert quad[i][i] == comb(nf.c[i], 2) % p
        for j in range(i + 1, N):
            assert quad[i][j] == (nf.c[i] * nf.c[j] + nf.d[i][j]) % p


@settings(max_examples=200, deadline=None)
@given(words, words, primes)
def test_collection_is_a_homomorphism(w1, w2, p):
    assert collect_mod_s3(w1 + w2, N, p) == collect_mod_s3(w1, N, p) * collect_mod_s3(w2, N, p)


@settings(max_examples=200, deadline=None)
@given(words, primes)
def test_inverses(w, p):
    nf = collect_mod_s3(w, N, p)
    assert collect_mod_s3(inverse(w), N, p) == nf.inverse()
    assert nf * nf.inverse() == NormalFormS3.identity(N, p)


def test_commutator_and_powers():
    c = collect_mod_s3(commutator(((1, 1),), ((2, 1),)), 2, 3)
    assert c.c == (0, 0) and c.d[0][1] == 1
    assert collect_mod_s3(power(((1, 1),), 9), 1, 3).c == (0,)
    assert reduce_word([(1, 2), (1, -2), (2, 1)]) == ((2, 1),)


def test_parse_sugar():
    P = parse_presentation("gens a b c ;\nrel [a,b]^2*(a.c)^3 ; # comment\nrel a^(-2) ;")
    assert P.names == ("a", "b", "c") and len(P.relators) == 2
    assert P.relators[1] == ((1, -2),)
    Q = parse_presentation(P.to_text())
    assert Q.relators == P.relators


def test_parse_longest_name_match():
    P = parse_presentation("gens x x1 ;\nrel x1^2 ;")
    assert P.relators == (((2, 2),),)


def test_zero_relators_allowed():
    P = parse_presentation("gens x y ;")
    M = presentation_cup_product(P, 2)
    assert (M.n, M.m) == (2, 0)


@pytest.mark.parametrize(
    "text, where",
    [
        ("gens a ;\nrel b ;", "line 2, col 5"),
        ("gens a ;\nrel a^ ;", "line 2"),
        ("gens a ;\nrel a*a^-1 ;", "line 2"),
        ("gens a ;\nrel ;", "line 2"),
        ("gens a ;\nrel [a,a ;", "line 2"),
        ("rel a ;", "line 1"),
        ("gens a a ;", "line 1"),
        ("gens a ;\nrel a", "line 2"),
    ],
)
def test_parse_errors_have_position(text, where):
    with pytest.raises(PresentationError) as exc:
        parse_presentation(text)
    assert where in str(exc.value)


def test_frattini_error_names_generator():
    with pytest.raises(FrattiniError) as exc:
        presentation_cup_product(parse_presentation("gens x y ;\nrel y^3 ;"), 2)
    assert exc.value.generator == 2


def test_dependent_relators_rejected():
    with pytest.raises(CupProductError):
        presentation_cup_product(parse_presentation("gens x y ;\nrel [x,y] ;\nrel [x,y]^3 ;"), 2)


def test_rank_one_p2():
    M = presentation_cup_product(parse_presentation("gens x ;\nrel x^2 ;"), 2)
    assert M.gram == (((1,),),) and M.eps == (1,)
    assert bilform.is_valid(M)


def test_demushkin_like_p2():
    # x^2 [x, y]: b(x, x) = b(x, y) = 1 and b(y, y) = 0, so b(., eps) = b(., .) forces eps = y
    M = presentation_cup_product(parse_presentation("gens x y ;\nrel x^2*[x,y] ;"), 2)
    assert M.gram == (((1,), (1,)), ((1,), (0,)))
    assert bilform.is_valid(M) and M.eps == (0, 1)


def test_raag_duality_small():
    for p in (2, 3):
        for n in range(1, 5):
            for g in enumerate_graphs(n):
                via_text = presentation_cup_product(parse_presentation(raag_text(g)), p)
                direct = presentation_cup_product(raag_presentation(g), p)
                assert bilform.dumps(via_text) == bilform.dumps(direct) == bilform.dumps(graph_bilinear(g, p))
