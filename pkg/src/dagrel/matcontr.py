"""Real contractions with the transpose dagger.

``MatContr`` has natural numbers as objects and contractive ``n x m``
matrices as morphisms ``m -> n``.  Its isometries are the matrices with
orthonormal columns.  Codilators come from a low-rank factor ``E`` of the
defect ``1 - R^T R``; dilators of the opposite category are obtained with
:func:`dagrel.core.dualize`, and :class:`Mat1Op` presents the resulting
epi-regular category of ``Op``-wrapped isometries directly.

All comparisons use the max-abs entry of the residual.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .core import (
    CompositionError, Cospan, DaggerCategory, EpiRegularCategory, MediationError, NumericalError,
    Op, PreconditionError, Span, Square, ValidationError, dualize, op_square,
)


@dataclass(frozen=True)
class ToleranceConfig:
    eq_tol: float = 1e-8
    rank_tol: float = 1e-10
    norm_slack: float = 1e-9

    def __post_init__(self):
        for k in ("eq_tol", "rank_tol", "norm_slack"):
            if not getattr(self, k) > 0:
                raise ValueError(f"{k} must be positive")

    def with_(self, **kw) -> "ToleranceConfig":
        return replace(self, **kw)


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True, eq=False)
class Matrix:
    """Immutable real matrix; as a morphism it goes ``cols -> rows``."""

    data: np.ndarray

    def __post_init__(self):
        a = np.array(self.data, dtype=float)
        if a.ndim != 2:
            raise ValidationError("matrix entries must form a 2-d array")
        a.setflags(write=False)
        object.__setattr__(self, "data", a)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(np.zeros((rows, cols)))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def dom(self) -> int:
        return self.cols

    @property
    def cod(self) -> int:
        return self.rows

    @property
    def T(self) -> "Matrix":
        return Matrix(self.data.T)

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.data.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "Matrix":
        try:
            n, m, ents = obj["rows"], obj["cols"], obj["entries"]
        except KeyError as exc:
            raise ValidationError(f"missing field {exc.args[0]!r}") from None
        if not (isinstance(n, int) and isinstance(m, int)) or n < 0 or m < 0:
            raise ValidationError("'rows' and 'cols' must be nonnegative integers")
        if not isinstance(ents, list) or len(ents) != n or any(
                not isinstance(r, list) or len(r) != m for r in ents):
            raise ValidationError(f"'entries' must be {n} lists of {m} numbers")
        try:
            a = np.array(ents, dtype=float).reshape(n, m)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"non-numeric entry: {exc}") from None
        return cls(a)

    def pretty(self, digits: int = 6) -> str:
        if self.rows == 0 or self.cols == 0:
            return f"<{self.rows}x{self.cols} empty>"
        cells = [[f"{x:.{digits}g}" if abs(x) > 1e-15 else "0" for x in row] for row in self.data]
        w = max(len(c) for row in cells for c in row)
        return "\n".join("[ " + "  ".join(c.rjust(w) for c in row) + " ]" for row in cells)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {np.round(self.data, 6).tolist()})"


def _eye(n: int) -> np.ndarray:
    return np.eye(n)


def resid(a: np.ndarray, b: np.ndarray) -> float:
    """Max-abs entry of ``a - b``; zero for empty arrays."""
    if a.shape != b.shape:
        return float("inf")
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def op_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


def mat_is_contractive(A: Matrix, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    if not np.all(np.isfinite(A.data)):
        raise ValidationError("matrix has non-finite entries")
    return op_norm(A.data) <= 1 + tol.norm_slack


def mat_is_isometry(A: Matrix, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    return resid(A.data.T @ A.data, _eye(A.cols)) <= tol.eq_tol


# ---------------------------------------------------------------------------
# Factoring the defect 1 - R^T R
# ---------------------------------------------------------------------------


def rank_threshold(eigs: np.ndarray, rank_tol: float) -> float:
    top = float(np.max(eigs)) if eigs.size else 0.0
    return rank_tol * max(top, 1.0)


def _normalise_signs(E: np.ndarray) -> np.ndarray:
    E = E.copy()
    for k in range(E.shape[0]):
        j = int(np.argmax(np.abs(E[k])))
        if E[k, j] < 0:
            E[k] = -E[k]
    return E


def eigen_factor(P: np.ndarray, rank_tol: float) -> np.ndarray:
    """Truncated eigendecomposition: rows ``sqrt(lambda) v^T`` for eigenvalues above threshold."""
    m = P.shape[0]
    if m == 0:
        return np.zeros((0, 0))
    lam, V = np.linalg.eigh((P + P.T) / 2)
    thr = rank_threshold(lam, rank_tol)
    keep = [k for k in np.argsort(-lam) if lam[k] > thr]
    E = np.array([np.sqrt(lam[k]) * V[:, k] for k in keep]).reshape(len(keep), m)
    return _normalise_signs(E)


def pivoted_cholesky(P: np.ndarray, rank_tol: float) -> np.ndarray:
    """Full-rank factor by diagonally pivoted outer-product Cholesky; rows of ``E`` with ``E^T E = P``."""
    m = P.shape[0]
    if m == 0:
        return np.zeros((0, 0))
    S = ((P + P.T) / 2).copy()
    thr = rank_threshold(np.linalg.eigvalsh(S), rank_tol)
    rows = []
    for _ in range(m):
        d = np.diag(S)
        j = int(np.argmax(d))
        if d[j] <= thr:
            break
        row = S[j] / np.sqrt(d[j])
        rows.append(row)
        S = S - np.outer(row, row)
    E = np.array(rows).reshape(len(rows), m)
    return _normalise_signs(E)


def unpivoted_factor(P: np.ndarray, rank_tol: float) -> np.ndarray:
    """Cholesky in natural order, zeroing any pivot at or below threshold.

    Kept only as the deliberate-bug variant for mutation testing; without
    pivoting small but genuine directions are silently discarded.
    """
    m = P.shape[0]
    S = ((P + P.T) / 2).copy()
    thr = rank_tol * max(float(np.max(np.diag(S))) if m else 0.0, 1.0)
    rows = []
    for j in range(m):
        if S[j, j] <= thr:
            continue
        row = S[j] / np.sqrt(S[j, j])
        rows.append(row)
        S = S - np.outer(row, row)
    return np.array(rows).reshape(len(rows), m)


FACTORS: dict[str, Callable[[np.ndarray, float], np.ndarray]] = {
    "eigh": eigen_factor,
    "pivoted-cholesky": pivoted_cholesky,
}


@dataclass(frozen=True, eq=False)
class Codilator:
    """Codilator of a contraction ``R : m -> n`` on ``d + n`` dimensions.

    ``E`` is ``d x m`` with ``E^T E = 1 - R^T R``; ``M`` is its right
    inverse ``E^T (E E^T)^-1``; the legs are ``[E; R]`` and ``[0; 1]``.
    """

    d: int
    E: np.ndarray
    M: np.ndarray
    R: Matrix
    left: Matrix
    right: Matrix
    residuals: dict = field(default_factory=dict)

    @property
    def cospan(self) -> Cospan:
        return Cospan(self.left, self.right)

    def to_json(self) -> dict:
        return {"d": self.d, "E": self.E.tolist(), "M": self.M.tolist(),
                "left": self.left.to_json(), "right": self.right.to_json(),
                "residuals": self.residuals}


def mat_codilator(R: Matrix, tol: ToleranceConfig = DEFAULT_TOL, method: str = "eigh",
                  factor: Callable | None = None, rank_tol: float | None = None) -> Codilator:
    """Codilator of a contraction, with its defining equations checked at ``tol.eq_tol``."""
    if not mat_is_contractive(R, tol):
        raise PreconditionError(f"not a contraction: operator norm {op_norm(R.data):.12g}")
    m, n = R.cols, R.rows
    P = _eye(m) - R.data.T @ R.data
    if m:
        lam_min = float(np.min(np.linalg.eigvalsh((P + P.T) / 2)))
        if lam_min < -4 * tol.norm_slack:
            raise NumericalError(f"1 - R^T R is indefinite: smallest eigenvalue {lam_min:.3g}")
    fac = factor if factor is not None else FACTORS[method]
    E = fac(P, tol.rank_tol if rank_tol is None else rank_tol)
    d = E.shape[0]
    G = E @ E.T
    M = np.linalg.solve(G, E).T if d else np.zeros((m, 0))
    left = Matrix(np.vstack([E, R.data]) if d + n else np.zeros((0, m)))
    right = Matrix(np.vstack([np.zeros((d, n)), _eye(n)]))
    res = {"factor": resid(E.T @ E, P), "right_inverse": resid(E @ M, _eye(d)),
           "left_isometry": resid(left.data.T @ left.data, _eye(m)),
           "right_isometry": resid(right.data.T @ right.data, _eye(n))}
    bad = {k: v for k, v in res.items() if v > tol.eq_tol}
    if bad:
        k, v = max(bad.items(), key=lambda kv: kv[1])
        raise NumericalError(f"codilator check '{k}' fails: residual {v:.3g} > {tol.eq_tol:g}")
    return Codilator(d, E, M, R, left, right, res)


def mat_mediator(codil: Codilator, A: Matrix, B: Matrix,
                 tol: ToleranceConfig = DEFAULT_TOL) -> Matrix:
    """The isometry ``[(A - B R) M, B]`` out of the codilator apex."""
    R = codil.R.data
    checks = (("A^T A = 1", A.data.T @ A.data, _eye(A.cols)),
              ("B^T B = 1", B.data.T @ B.data, _eye(B.cols)),
              ("B^T A = R", B.data.T @ A.data, R))
    for name, x, y in checks:
        if resid(x, y) > tol.eq_tol:
            raise PreconditionError(f"not a codilation: {name} fails by {resid(x, y):.3g}")
    C = np.hstack([(A.data - B.data @ R) @ codil.M, B.data])
    return Matrix(C)


def solve_cocone(legs: Cospan, targets: Cospan) -> Matrix:
    """Least-squares ``C`` with ``C legs.left = targets.left`` and ``C legs.right = targets.right``."""
    K = np.hstack([legs.left.data, legs.right.data])
    T = np.hstack([targets.left.data, targets.right.data])
    if K.shape[0] == 0:
        return Matrix(np.zeros((T.shape[0], 0)))
    return Matrix(T @ np.linalg.pinv(K))


def numerical_rank(a: np.ndarray, rank_tol: float) -> int:
    """Rank from squared singular values, thresholded like eigenvalues of a Gram matrix."""
    if a.size == 0:
        return 0
    s2 = np.linalg.svd(a, compute_uv=False) ** 2
    return int(np.sum(s2 > rank_threshold(s2, rank_tol)))


def mat_is_jointly_epic(cs: Cospan, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    K = np.hstack([cs.left.data, cs.right.data])
    return numerical_rank(K, tol.rank_tol) == K.shape[0]


def mat_rel_orthogonal(A: Matrix, B: Matrix, U: Matrix, V: Matrix,
                       tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether ``A^T B = U V^T``, i.e. Col A and Col B are orthogonal relative to Col AU.

    Decided from ``A^T B - U V^T`` and, independently, from
    ``A^T (1 - P) B`` with ``P`` the projector onto Col AU.  The two
    residuals coincide for exact inputs; a gap larger than ``eq_tol``
    means the inputs violate the preconditions.
    """
    if A.rows != B.rows or U.rows != A.cols or V.rows != B.cols or U.cols != V.cols:
        raise CompositionError("dimension mismatch in relative orthogonality test")
    r1 = resid(A.data.T @ B.data, U.data @ V.data.T)
    C = A.data @ U.data
    P = C @ C.T
    r2 = resid(A.data.T @ (_eye(A.rows) - P) @ B.data, np.zeros((A.cols, B.cols)))
    if abs(r1 - r2) > tol.eq_tol:
        raise NumericalError(f"orthogonality criteria disagree ({r1:.3g} vs {r2:.3g}); "
                             "check that A, B, U, V are isometries with AU = BV")
    return r1 <= tol.eq_tol


def mat_coind_pushout(U: Matrix, V: Matrix, tol: ToleranceConfig = DEFAULT_TOL,
                      method: str = "eigh", factor: Callable | None = None) -> Cospan:
    """Co-independent pushout of isometries ``U : k -> m`` and ``V : k -> n``."""
    for name, X in (("U", U), ("V", V)):
        if not mat_is_isometry(X, tol):
            raise PreconditionError(f"{name} is not an isometry")
    if U.cols != V.cols:
        raise CompositionError("U and V must share a domain")
    return mat_codilator(Matrix(V.data @ U.data.T), tol, method, factor).cospan


def mat_cofactorize(F: Matrix, G: Matrix,
                    tol: ToleranceConfig = DEFAULT_TOL) -> tuple[Matrix, Cospan]:
    """Orthonormal basis ``Q`` of Col F + Col G; returns ``(Q, (Q^T F, Q^T G))``."""
    if F.rows != G.rows:
        raise CompositionError("F and G must share a codomain")
    K = np.hstack([F.data, G.data])
    p = K.shape[0]
    if K.size == 0:
        Q = np.zeros((p, 0))
    else:
        Uk, s, _ = np.linalg.svd(K, full_matrices=False)
        r = int(np.sum(s ** 2 > rank_threshold(s ** 2, tol.rank_tol)))
        Q = Uk[:, :r]
        Q = _normalise_signs(Q.T).T
    return Matrix(Q), Cospan(Matrix(Q.T @ F.data), Matrix(Q.T @ G.data))


def l2_functor(r) -> Matrix:
    """0/1 matrix of a partial injection ``[m] -> [n]``: entry ``(j, i)`` is 1 iff ``r(i) = j``."""
    m, n = len(r.dom), len(r.cod)
    for X, k in ((r.dom, m), (r.cod, n)):
        if tuple(X) != tuple(sorted((str(i) for i in range(1, k + 1)))):
            raise PreconditionError("l2 needs canonical objects [n] = {1, ..., n}")
    a = np.zeros((n, m))
    for x, y in r.pairs:
        a[int(y) - 1, int(x) - 1] = 1.0
    return Matrix(a)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

NEAR_ISOMETRIC_DEFECT = 8e-8


def _np_rng(rng: random.Random) -> np.random.Generator:
    return np.random.default_rng(rng.getrandbits(63))


def _orthonormal(g: np.random.Generator, n: int, k: int) -> np.ndarray:
    if n == 0 or k == 0:
        return np.zeros((n, k))
    q, r = np.linalg.qr(g.standard_normal((n, k)))
    return q * np.sign(np.where(np.diag(r) == 0, 1, np.diag(r)))


def random_contraction(rng: random.Random, m: int, n: int) -> Matrix:
    """``U diag(s) V^T`` with singular values drawn from a mix of generic, unit, near-unit and zero."""
    g = _np_rng(rng)
    k = min(m, n)
    s = []
    for _ in range(k):
        t = rng.random()
        if t < 0.15:
            s.append(1.0)
        elif t < 0.3:
            s.append(np.sqrt(1 - NEAR_ISOMETRIC_DEFECT))
        elif t < 0.4:
            s.append(0.0)
        else:
            s.append(rng.random())
    U, V = _orthonormal(g, n, k), _orthonormal(g, m, k)
    return Matrix(U @ np.diag(s) @ V.T if k else np.zeros((n, m)))


def random_isometry_matrix(rng: random.Random, m: int, n: int) -> Matrix:
    if m > n:
        raise PreconditionError(f"no isometry from dimension {m} into {n}")
    return Matrix(_orthonormal(_np_rng(rng), n, m))


class MatContr(DaggerCategory):
    """Natural numbers and contractive real matrices under transpose."""

    name = "Mat<=1"
    exact = False

    def __init__(self, tol: ToleranceConfig = DEFAULT_TOL, max_dim: int = 5, method: str = "eigh",
                 factor: Callable | None = None, factor_rank_tol: float | None = None,
                 dagger_impl: Callable[[Matrix], Matrix] | None = None):
        self.tol = tol
        self.max_dim = max_dim
        self.method = method
        self.factor = factor
        self.factor_rank_tol = factor_rank_tol
        self.dagger_impl = dagger_impl

    def identity(self, X):
        return Matrix(_eye(X))

    def compose(self, g, f):
        if f.cod != g.dom:
            raise CompositionError(f"cannot compose {g.rows}x{g.cols} after {f.rows}x{f.cols}")
        return Matrix(g.data @ f.data)

    def dagger(self, f):
        if self.dagger_impl is not None:
            return self.dagger_impl(f)
        return f.T

    def mor_eq(self, f, g) -> bool:
        return resid(f.data, g.data) <= self.tol.eq_tol

    def validate(self, f) -> None:
        if not isinstance(f, Matrix):
            raise ValidationError(f"expected Matrix, got {type(f).__name__}")
        if not mat_is_contractive(f, self.tol):
            raise ValidationError(f"not a contraction: operator norm {op_norm(f.data):.12g}")

    def validate_object(self, X) -> None:
        if not isinstance(X, int) or X < 0:
            raise ValidationError("objects are nonnegative integers")

    def codilator_full(self, r: Matrix) -> Codilator:
        return mat_codilator(r, self.tol, self.method, self.factor, self.factor_rank_tol)

    def codilator(self, r) -> Cospan:
        return self.codilator_full(r).cospan

    def comediate(self, codilator: Cospan, codilation: Cospan):
        C = solve_cocone(codilator, codilation)
        for side, leg, tgt in (("left", codilator.left, codilation.left),
                               ("right", codilator.right, codilation.right)):
            if resid(C.data @ leg.data, tgt.data) > self.tol.eq_tol:
                raise MediationError(f"{side} triangle fails", triangle=f"c i_{side} = target")
        return C

    def is_jointly_epic(self, cospan: Cospan) -> bool:
        return mat_is_jointly_epic(cospan, self.tol)

    def objects_up_to(self, n: int) -> list:
        return list(range(n + 1))

    def random_object(self, rng):
        return rng.randint(0, self.max_dim) if rng.random() < 0.05 else rng.randint(1, self.max_dim)

    def random_morphism(self, rng, dom=None, cod=None):
        m = self.random_object(rng) if dom is None else dom
        n = self.random_object(rng) if cod is None else cod
        return random_contraction(rng, m, n)

    def random_isometry(self, rng, dom=None, cod=None):
        if dom is None:
            dom = rng.randint(0, self.max_dim if cod is None else cod)
        if cod is None:
            cod = rng.randint(dom, max(dom, self.max_dim))
        return random_isometry_matrix(rng, dom, cod)


class Mat1Op(EpiRegularCategory):
    """Opposite of real isometries, on ``Op``-wrapped matrices.

    ``Op(J) : p -> m`` wraps an isometry ``J : m -> p``.  A square is
    independent when the underlying square of isometries commutes and its
    two outer legs are relatively orthogonal.
    """

    name = "Mat_1^op"
    exact = False

    def __init__(self, base: MatContr | None = None):
        self.mat = base if base is not None else MatContr()
        self.tol = self.mat.tol
        self.dagger_base = dualize(self.mat)

    def identity(self, X):
        return Op(Matrix(_eye(X)))

    def compose(self, g, f):
        if f.cod != g.dom:
            raise CompositionError("cannot compose")
        return Op(Matrix(f.inner.data @ g.inner.data))

    def mor_eq(self, f, g) -> bool:
        return resid(f.inner.data, g.inner.data) <= self.tol.eq_tol

    def validate(self, f) -> None:
        if not isinstance(f, Op) or not isinstance(f.inner, Matrix):
            raise ValidationError("morphisms of Mat_1^op are Op-wrapped matrices")
        if not mat_is_isometry(f.inner, self.tol):
            raise ValidationError("underlying matrix is not an isometry")

    def is_independent(self, sq: Square) -> bool:
        b = op_square(sq)
        if resid(b.u.data @ b.f.data, b.v.data @ b.g.data) > self.tol.eq_tol:
            return False
        return mat_rel_orthogonal(b.u, b.v, b.f, b.g, self.tol)

    def independent_pullback(self, cospan: Cospan) -> Span:
        c = mat_coind_pushout(cospan.left.inner, cospan.right.inner, self.tol,
                              self.mat.method, self.mat.factor)
        return Span(Op(c.left), Op(c.right))

    def factorize(self, span: Span):
        Q, cs = mat_cofactorize(span.left.inner, span.right.inner, self.tol)
        return Op(Q), Span(Op(cs.left), Op(cs.right))

    def is_jointly_monic(self, span: Span) -> bool:
        return mat_is_jointly_epic(Cospan(span.left.inner, span.right.inner), self.tol)

    def lift(self, target: Span, source: Span):
        legs = Cospan(target.left.inner, target.right.inner)
        tg = Cospan(source.left.inner, source.right.inner)
        C = solve_cocone(legs, tg)
        for side, leg, t in (("left", legs.left, tg.left), ("right", legs.right, tg.right)):
            if resid(C.data @ leg.data, t.data) > self.tol.eq_tol:
                raise MediationError(f"{side} triangle fails", triangle=f"{side} triangle")
        if not mat_is_isometry(C, self.tol):
            raise MediationError("lift is not an isometry", triangle="c^T c = 1")
        return Op(C)

    def is_iso(self, f) -> bool:
        return f.inner.rows == f.inner.cols and mat_is_isometry(f.inner, self.tol)

    def inverse(self, f):
        if not self.is_iso(f):
            raise PreconditionError("not an orthogonal matrix")
        return Op(f.inner.T)

    def terminal(self):
        return 0

    def to_terminal(self, X):
        return Op(Matrix(np.zeros((X, 0))))

    def objects_up_to(self, n: int) -> list:
        return list(range(n + 1))

    def random_object(self, rng):
        return self.mat.random_object(rng)

    def random_morphism(self, rng, dom=None, cod=None):
        return Op(self.mat.random_isometry(rng, dom=cod, cod=dom))
