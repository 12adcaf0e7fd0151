from __future__ import annotations

import json
import random
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from dagrel.core import Cospan, Span, Square, ValidationError, is_coisometry, verify_dilator
from dagrel.finprob import (
    FinProbDet, FinProbSpace, FinProbSto, StochMap, deterministic_maps, fp_bayes, fp_compose,
    fp_conditional_product, fp_delta, fp_dilator, fp_factorize, fp_identity, fp_is_deterministic,
    fp_is_independent, fp_is_jointly_monic, joint_law, parse_rational, random_deterministic,
    standard_spaces, stochastic_grid,
)
from dagrel.relcat import RelCategory

S = FinProbSto()
DET = FinProbDet(S)
U2 = FinProbSpace.from_dict({"a1": F(1, 2), "a2": F(1, 2)})
B34 = FinProbSpace.from_dict({"b1": F(3, 4), "b2": F(1, 4)})
R = StochMap(U2, B34, ((1, F(1, 2)), (0, F(1, 2))))


def rows(m):
    return [list(r) for r in m.entries]


# spaces and maps -------------------------------------------------------------


def test_space_invariants():
    with pytest.raises(ValidationError):
        FinProbSpace.from_dict({"x": F(1, 2), "y": F(1, 3)})
    with pytest.raises(ValidationError):
        FinProbSpace.from_dict({"x": F(1), "y": F(0)})
    with pytest.raises(ValidationError):
        parse_rational(0.5)
    assert parse_rational("3/6") == F(1, 2)


def test_validate_catches_bad_maps():
    R.validate()
    with pytest.raises(ValidationError, match="column sum"):
        StochMap(U2, B34, ((1, F(1, 2)), (0, F(2, 5)))).validate()
    with pytest.raises(ValidationError, match="measure preservation"):
        StochMap(U2, B34, ((1, 1), (0, 0))).validate()


def test_compose_hand_product():
    U = FinProbSpace.uniform(["1", "2"])
    p = StochMap(U, U, ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2))))
    q = StochMap(U, U, ((F(3, 4), F(1, 4)), (F(1, 4), F(3, 4))))
    assert rows(fp_compose(q, p)) == [[F(1, 2)] * 2, [F(1, 2)] * 2]
    assert rows(fp_compose(q, q)) == [[F(5, 8), F(3, 8)], [F(3, 8), F(5, 8)]]
    assert fp_compose(fp_identity(U), p) == p == fp_compose(p, fp_identity(U))


def test_compose_closed_and_contravariant_dagger(rng):
    for _ in range(200):
        r = S.random_morphism(rng)
        s = S.random_morphism(rng, dom=r.dst)
        sr = fp_compose(s, r)
        sr.validate()
        assert fp_bayes(sr) == fp_compose(fp_bayes(r), fp_bayes(s))
        assert fp_bayes(fp_bayes(r)) == r


def test_bayes_example():
    assert rows(fp_bayes(R)) == [[F(2, 3), 0], [F(1, 3), 1]]
    swap = fp_delta({"a1": "a2", "a2": "a1"}, U2, U2)
    assert fp_bayes(swap) == swap


def test_deterministic_matches_coisometry_exhaustive():
    assert fp_is_deterministic(fp_identity(U2))
    one = FinProbSpace.from_dict({"*": F(1)})
    col = StochMap(one, U2, ((F(1, 2),), (F(1, 2),)))
    assert not fp_is_deterministic(col) and not is_coisometry(S, col)
    n = 0
    for X, Y in product(standard_spaces(3), repeat=2):
        for f in stochastic_grid(X, Y):
            assert fp_is_deterministic(f) == is_coisometry(S, f)
            n += 1
    assert n > 50


def test_delta_examples(rng):
    assert fp_delta({"a1": "a1", "a2": "a2"}, U2, U2) == fp_identity(U2)
    const = fp_delta({"a1": "*", "a2": "*"}, U2)
    assert rows(const) == [[1, 1]] and const.dst.weights == (F(1),)
    with pytest.raises(ValidationError):
        fp_delta({"a1": "x", "a2": "x"}, U2, FinProbSpace.uniform(["x", "y"]))
    for _ in range(50):
        X = S.random_object(rng)
        d1 = random_deterministic(rng, X)
        d2 = random_deterministic(rng, d1.dst)
        comp = {x: d2.as_function()[d1.as_function()[x]] for x in X.points}
        assert fp_delta(comp, X, d2.dst) == fp_compose(d2, d1)


# dilators ---------------------------------------------------------------------


def test_dilator_example():
    d = fp_dilator(R)
    assert d.apex.as_dict() == {"(a1|b1)": F(1, 2), "(a2|b1)": F(1, 4), "(a2|b2)": F(1, 4)}
    assert fp_compose(d.right, fp_bayes(d.left)) == R
    assert verify_dilator(S, R, d)


def test_dilator_of_deterministic_is_graph(rng):
    for _ in range(30):
        f = DET.random_morphism(rng)
        d = fp_dilator(f)
        assert len(d.apex) == len(f.src) and DET.is_iso(d.left)
        assert fp_compose(d.right, fp_bayes(d.left)) == f


def test_dilator_marginals_and_equation(rng):
    for _ in range(100):
        r = S.random_morphism(rng)
        d = fp_dilator(r)
        assert d.left.dst == r.src and d.right.dst == r.dst
        d.left.validate()
        d.right.validate()
        assert fp_compose(d.right, fp_bayes(d.left)) == r
        assert fp_is_jointly_monic(d)


# conditional products and independence -------------------------------------------


def test_conditional_product_over_point_is_product():
    A, B = U2, B34
    sp = fp_conditional_product(Cospan(DET.to_terminal(A), DET.to_terminal(B)))
    law = joint_law(sp)
    assert law == {(a, b): wa * wb for a, wa in A.as_dict().items() for b, wb in B.as_dict().items()}


def test_conditional_product_along_identity(rng):
    for _ in range(30):
        v = DET.random_morphism(rng)
        sp = fp_conditional_product(Cospan(fp_identity(v.dst), v))
        assert len(sp.apex) == len(v.src) and DET.is_iso(sp.right)


def test_conditional_product_agrees_with_dilator(rng):
    for _ in range(100):
        u = DET.random_morphism(rng)
        v = DET.random_morphism(rng, cod=u.dst)
        cp = fp_conditional_product(Cospan(u, v))
        dil = fp_dilator(fp_compose(fp_bayes(v), u))
        assert joint_law(cp) == joint_law(dil)
        assert fp_is_independent(Square(cp.left, cp.right, u, v))


def test_independence_examples():
    one = FinProbSpace.from_dict({"*": F(1)})
    coin = FinProbSpace.uniform(["h", "t"])
    prod = FinProbSpace.uniform(["hh", "ht", "th", "tt"])
    p1 = fp_delta({x: x[0] for x in prod.points}, prod, coin)
    p2 = fp_delta({x: x[1] for x in prod.points}, prod, coin)
    bang = DET.to_terminal(coin)
    assert fp_is_independent(Square(p1, p2, bang, bang))
    diag = FinProbSpace.uniform(["hh", "tt"])
    d1 = fp_delta({x: x[0] for x in diag.points}, diag, coin)
    d2 = fp_delta({x: x[1] for x in diag.points}, diag, coin)
    assert not fp_is_independent(Square(d1, d2, bang, bang))
    f = fp_delta({"a1": "x", "a2": "x"}, U2)
    one_a = fp_identity(U2)
    assert fp_is_independent(Square(f, f, fp_identity(f.dst), fp_identity(f.dst)))
    assert fp_is_independent(Square(one_a, one_a, one_a, one_a))
    # non-commuting square is simply not independent
    swap = fp_delta({"a1": "a2", "a2": "a1"}, U2, U2)
    assert not fp_is_independent(Square(one_a, one_a, one_a, swap))
    assert one.weights == (F(1),)


def test_independence_symmetric(rng):
    for _ in range(100):
        u = DET.random_morphism(rng)
        v = DET.random_morphism(rng, cod=u.dst)
        for sp in (fp_conditional_product(Cospan(u, v)),
                   fp_dilator(S.random_morphism(rng, dom=u.src, cod=v.src))):
            if DET.compose(u, sp.left) != DET.compose(v, sp.right):
                continue
            sq = Square(sp.left, sp.right, u, v)
            assert fp_is_independent(sq) == fp_is_independent(sq.transpose())


# factorisation ----------------------------------------------------------------------


def test_factorize_examples(rng):
    d = fp_dilator(R)
    e, m = fp_factorize(d)
    assert DET.is_iso(e)
    f = DET.random_morphism(rng)
    e, m = fp_factorize(Span(f, f))
    assert len(m.apex) == len(f.dst)
    for _ in range(100):
        X = S.random_object(rng)
        f, g = random_deterministic(rng, X), random_deterministic(rng, X)
        e, m = fp_factorize(Span(f, g))
        assert DET.compose(m.left, e) == f and DET.compose(m.right, e) == g
        assert fp_is_jointly_monic(m)


# couplings ----------------------------------------------------------------------------


def test_relation_composite_is_matrix_product(rng):
    rel = RelCategory(DET)
    for _ in range(60):
        r = S.random_morphism(rng)
        s = S.random_morphism(rng, dom=r.dst)
        R_, S_ = rel.relation(fp_dilator(r)), rel.relation(fp_dilator(s))
        assert rel.epsilon(rel.compose(S_, R_)) == fp_compose(s, r)


def test_deterministic_maps_are_the_deterministic_grid_points():
    for X, Y in product(standard_spaces(3), repeat=2):
        a = {tuple(map(tuple, m.entries)) for m in deterministic_maps(X, Y)}
        b = {tuple(map(tuple, m.entries)) for m in stochastic_grid(X, Y) if m.is_deterministic()}
        assert a == b


# serialisation ------------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_json_roundtrip(seed):
    r = S.random_morphism(random.Random(seed))
    back = StochMap.from_json(json.loads(json.dumps(r.to_json())))
    assert back == r
    assert all(isinstance(w, str) and "/" in w for w in r.to_json()["src"]["weights"])


def test_json_rejects_duplicates():
    obj = R.to_json()
    obj["entries"].append(obj["entries"][0])
    with pytest.raises(ValidationError):
        StochMap.from_json(obj)
