from __future__ import annotations

import json
import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dagrel.core import (
    Cospan, NumericalError, Op, PreconditionError, Span, Square, ValidationError, dualize,
    verify_dilator,
)
from dagrel.finset import finset_range
from dagrel.matcontr import (
    DEFAULT_TOL, Mat1Op, MatContr, Matrix, ToleranceConfig, eigen_factor, l2_functor,
    mat_codilator, mat_cofactorize, mat_coind_pushout, mat_is_contractive, mat_is_isometry,
    mat_is_jointly_epic, mat_mediator, mat_rel_orthogonal, op_norm, pivoted_cholesky,
    random_contraction, random_isometry_matrix, resid, solve_cocone,
)
from dagrel.pinj import PInj, all_partial_injections, pi_compose, pi_dagger

M = MatContr()
COMPOSITE = 1e-6
s2 = 1 / np.sqrt(2)


def mat(rows):
    return Matrix(np.array(rows, dtype=float).reshape(len(rows), -1 if rows else 0))


def is_orthogonal(C: Matrix, tol=COMPOSITE) -> bool:
    return C.rows == C.cols and resid(C.data.T @ C.data, np.eye(C.cols)) <= tol


# predicates ----------------------------------------------------------------------


def test_tolerance_config():
    assert DEFAULT_TOL == ToleranceConfig(1e-8, 1e-10, 1e-9)
    with pytest.raises(ValueError):
        ToleranceConfig(eq_tol=0)


def test_contractive_examples(rng):
    assert mat_is_contractive(Matrix(np.eye(3)))
    assert not mat_is_contractive(mat([[2.0]]))
    with pytest.raises(ValidationError):
        mat_is_contractive(mat([[np.nan]]))
    for _ in range(100):
        A = Matrix(np.random.default_rng(rng.getrandbits(32)).standard_normal(
            (rng.randint(1, 5), rng.randint(1, 5))))
        assert abs(op_norm(A.data) - op_norm(A.T.data)) <= 1e-10 * max(1, op_norm(A.data))


def test_isometry_examples():
    for A in (mat([[1, 0], [0, 1], [0, 0]]), mat([[s2, -s2], [s2, s2]]),
              mat([[.5, -.5, -.5], [.5, -.5, .5], [.5, .5, -.5], [.5, .5, .5]])):
        assert mat_is_isometry(A)
    assert not mat_is_isometry(Matrix(np.full((3, 2), 0.5)))
    for n in range(4):
        assert mat_is_isometry(Matrix.zeros(n, 0))


def test_dagger_is_transpose(rng):
    for _ in range(50):
        f = M.random_morphism(rng)
        g = M.random_morphism(rng, dom=f.cod)
        assert M.mor_eq(M.dagger(M.compose(g, f)), M.compose(M.dagger(f), M.dagger(g)))
        assert M.mor_eq(M.dagger(M.dagger(f)), f)


# codilators -------------------------------------------------------------------------


def test_codilator_of_identity():
    c = mat_codilator(Matrix(np.eye(3)))
    assert c.d == 0
    assert resid(c.left.data, np.eye(3)) == 0 and resid(c.right.data, np.eye(3)) == 0


def test_codilator_l2_example():
    c = mat_codilator(mat([[1, 0], [0, 0]]))
    assert c.d == 1
    assert resid(np.abs(c.E), np.array([[0.0, 1.0]])) <= 1e-12
    # legs agree with the displayed ones up to a unitary on the apex
    A = mat([[0, 1], [1, 0], [0, 0]])
    B = mat([[0, 0], [1, 0], [0, 1]])
    C = mat_mediator(c, A, B)
    assert is_orthogonal(C)


def test_codilator_half():
    c = mat_codilator(mat([[0.5]]))
    assert c.d == 1
    assert abs(c.E[0, 0] - np.sqrt(3) / 2) <= 1e-12
    assert abs(c.M[0, 0] - 2 / np.sqrt(3)) <= 1e-12
    assert resid(c.left.data, np.array([[np.sqrt(3) / 2], [0.5]])) <= 1e-12


def test_codilator_errors():
    with pytest.raises(PreconditionError, match="not a contraction"):
        mat_codilator(mat([[1.5]]))
    # within norm slack but 1 - R^T R clearly indefinite cannot happen; a tiny excess is accepted
    c = mat_codilator(mat([[1 + 1e-10]]))
    assert c.d == 0


def test_codilators_verified_for_all_dims(rng):
    D = dualize(M)
    for m, n in product(range(7), repeat=2):
        for _ in range(5):
            R = random_contraction(rng, m, n)
            c = mat_codilator(R)
            assert max(c.residuals.values()) <= COMPOSITE
            assert mat_is_jointly_epic(c.cospan)
            assert verify_dilator(D, Op(R), Span(Op(c.right), Op(c.left)))


def test_factor_methods_agree_up_to_unitary(rng):
    for _ in range(100):
        k = rng.randint(1, 5)
        R = random_contraction(rng, k, rng.randint(0, 5))
        P = np.eye(k) - R.data.T @ R.data
        E1, E2 = eigen_factor(P, 1e-10), pivoted_cholesky(P, 1e-10)
        assert E1.shape == E2.shape
        if E1.shape[0]:
            U = E2 @ np.linalg.pinv(E1)
            assert resid(U @ E1, E2) <= COMPOSITE and resid(U.T @ U, np.eye(len(U))) <= COMPOSITE


def test_mediator_examples(rng):
    for _ in range(50):
        R = random_contraction(rng, rng.randint(0, 4), rng.randint(0, 4))
        c = mat_codilator(R)
        p = c.left.rows
        C = mat_mediator(c, c.left, c.right)
        assert resid(C.data, np.eye(p)) <= COMPOSITE
        pad = lambda X: Matrix(np.vstack([X.data, np.zeros((1, X.cols))]))
        C = mat_mediator(c, pad(c.left), pad(c.right))
        assert resid(C.data, np.vstack([np.eye(p), np.zeros((1, p))])) <= COMPOSITE
        U = random_isometry_matrix(rng, p, p)
        C = mat_mediator(c, Matrix(U.data @ c.left.data), Matrix(U.data @ c.right.data))
        assert resid(C.data, U.data) <= COMPOSITE
    c = mat_codilator(mat([[0.5]]))
    with pytest.raises(PreconditionError, match="B\\^T A = R"):
        mat_mediator(c, mat([[1.0]]), mat([[1.0]]))


# relative orthogonality and pushouts ---------------------------------------------------------


def test_rel_orthogonal_examples():
    e1, e2 = mat([[1], [0]]), mat([[0], [1]])
    empty = Matrix.zeros(1, 0)
    assert mat_rel_orthogonal(e1, e2, empty, empty)
    assert not mat_rel_orthogonal(e1, mat([[s2], [s2]]), empty, empty)
    one = Matrix(np.eye(2))
    assert mat_rel_orthogonal(one, one, one, one)


def _extend(g, common: np.ndarray, extra: int) -> np.ndarray:
    """Orthonormal columns: ``common`` followed by ``extra`` random directions orthogonal to it."""
    p, k = common.shape
    Q, _ = np.linalg.qr(np.hstack([common, g.standard_normal((p, extra))]))
    return np.hstack([common, Q[:, k:k + extra] * 1.0])


def test_rel_orthogonal_random_subspaces(rng):
    seen = {True: 0, False: 0}
    for _ in range(200):
        p = rng.randint(1, 6)
        k = rng.randint(0, p)
        g = np.random.default_rng(rng.getrandbits(32))
        Q, _ = np.linalg.qr(g.standard_normal((p, p)))
        common = Q[:, :k]
        a, b = rng.randint(k, p), rng.randint(k, p)
        if rng.random() < 0.5 and a + b - k <= p:
            A, B = Q[:, :a], np.hstack([common, Q[:, a:a + b - k]])
        else:
            A, B = _extend(g, common, a - k), _extend(g, common, b - k)
        A, B = Matrix(A), Matrix(B)
        U, V = Matrix(A.data.T @ common), Matrix(B.data.T @ common)
        Pc = common @ common.T
        expect = resid(A.data.T @ (np.eye(p) - Pc) @ B.data, np.zeros((A.cols, B.cols))) <= 1e-8
        got = mat_rel_orthogonal(A, B, U, V)
        assert got == expect
        assert got == (resid(A.data.T @ B.data, U.data @ V.data.T) <= 1e-8)
        seen[got] += 1
    assert seen[True] and seen[False]


def test_coind_pushout_examples(rng):
    U, V = Matrix.zeros(2, 0), Matrix.zeros(3, 0)
    cs = mat_coind_pushout(U, V)
    K = np.hstack([cs.left.data, cs.right.data])
    assert K.shape == (5, 5) and is_orthogonal(Matrix(K))
    assert resid(cs.left.data.T @ cs.right.data, np.zeros((2, 3))) <= 1e-12
    one = Matrix(np.eye(3))
    cs = mat_coind_pushout(one, one)
    assert is_orthogonal(cs.left) and is_orthogonal(cs.right)


def test_coind_pushout_property_by_cocone_solving(rng):
    for _ in range(60):
        k = rng.randint(0, 3)
        U = random_isometry_matrix(rng, k, rng.randint(k, 4))
        V = random_isometry_matrix(rng, k, rng.randint(k, 4))
        cs = mat_coind_pushout(U, V)
        assert resid(cs.left.data @ U.data, cs.right.data @ V.data) <= COMPOSITE
        assert mat_is_jointly_epic(cs)
        # any cocone of isometries factors uniquely through the pushout
        q = cs.left.rows + rng.randint(0, 2)
        W = random_isometry_matrix(rng, cs.left.rows, q)
        tgt = Cospan(Matrix(W.data @ cs.left.data), Matrix(W.data @ cs.right.data))
        C = solve_cocone(cs, tgt)
        assert resid(C.data, W.data) <= COMPOSITE


def test_cofactorize_examples(rng):
    F = random_isometry_matrix(rng, 2, 4)
    Q, cs = mat_cofactorize(F, F)
    assert Q.cols == 2 and resid(Q.data @ Q.data.T, F.data @ F.data.T) <= COMPOSITE
    W = random_isometry_matrix(rng, 3, 3)
    Q, cs = mat_cofactorize(W, W)
    assert is_orthogonal(Q)
    for _ in range(100):
        p = rng.randint(0, 5)
        F = random_isometry_matrix(rng, rng.randint(0, p), p)
        G = random_isometry_matrix(rng, rng.randint(0, p), p)
        Q, cs = mat_cofactorize(F, G)
        assert mat_is_isometry(Q) and mat_is_isometry(cs.left) and mat_is_isometry(cs.right)
        assert resid(Q.data @ cs.left.data, F.data) <= COMPOSITE
        assert resid(Q.data @ cs.right.data, G.data) <= COMPOSITE
        assert mat_is_jointly_epic(cs)


def test_mat1op_independent_pullback_is_independent(rng):
    C = Mat1Op(M)
    for _ in range(50):
        u = C.random_morphism(rng)
        v = C.random_morphism(rng, cod=u.cod)
        sp = C.independent_pullback(Cospan(u, v))
        assert C.is_independent(Square(sp.left, sp.right, u, v))
        assert C.is_jointly_monic(sp)


# l2 -----------------------------------------------------------------------------------


def test_l2_examples(rng):
    P = PInj()
    assert resid(l2_functor(P.identity(finset_range(3))).data, np.eye(3)) == 0
    (r,) = [r for r in all_partial_injections(finset_range(2), finset_range(2))
            if r.pairs == frozenset({("1", "1")})]
    assert l2_functor(r).data.tolist() == [[1, 0], [0, 0]]
    for _ in range(100):
        r = P.random_morphism(rng, dom=finset_range(rng.randint(0, 4)), cod=finset_range(rng.randint(0, 4)))
        s = P.random_morphism(rng, dom=r.cod, cod=finset_range(rng.randint(0, 4)))
        assert resid(l2_functor(pi_compose(s, r)).data, l2_functor(s).data @ l2_functor(r).data) == 0
        assert resid(l2_functor(pi_dagger(r)).data, l2_functor(r).data.T) == 0
        a = l2_functor(r).data
        assert a.sum(axis=0).max(initial=0) <= 1 and a.sum(axis=1).max(initial=0) <= 1


def test_l2_requires_canonical_objects():
    from dagrel.finset import FinSet
    from dagrel.pinj import pi_identity
    with pytest.raises(PreconditionError):
        l2_functor(pi_identity(FinSet(["a"])))


# serialisation ---------------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_json_roundtrip(seed):
    A = M.random_morphism(random.Random(seed))
    B = Matrix.from_json(json.loads(json.dumps(A.to_json())))
    assert B.data.shape == A.data.shape and resid(A.data, B.data) == 0


def test_json_errors_and_empty_shapes():
    assert Matrix.from_json({"rows": 0, "cols": 3, "entries": []}).data.shape == (0, 3)
    assert Matrix.from_json({"rows": 2, "cols": 0, "entries": [[], []]}).data.shape == (2, 0)
    with pytest.raises(ValidationError):
        Matrix.from_json({"rows": 1, "cols": 2, "entries": [[1]]})
    with pytest.raises(ValidationError):
        Matrix.from_json({"rows": 1, "cols": 1, "entries": [["x"]]})
