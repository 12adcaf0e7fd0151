"""Abstract dagger categories, dilators, independence and epi-regular structure.

Every concrete category in this package implements :class:`DaggerCategory`
(the dilatory dagger category ``D``) and an :class:`EpiRegularCategory`
(a hand-built presentation of its coisometries ``C``).  The generic
:class:`CoisomCategory` derives the epi-regular structure of ``C`` from the
dagger operations alone, so every instance can be checked along two routes.

Composition is written ``compose(g, f)`` for "g after f".
"""

from __future__ import annotations

import random
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Optional, Sequence

import numpy as np

MAX_WITNESSES = 20


class DagrelError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(DagrelError, ValueError):
    """A morphism or object violates the invariants of its category."""


class CompositionError(ValidationError):
    """Domain and codomain do not match."""


class PreconditionError(DagrelError, ValueError):
    pass


class NumericalError(DagrelError, ArithmeticError):
    pass


class MediationError(DagrelError):
    """No (co)isometric mediator exists; ``triangle`` names the failed equation."""

    def __init__(self, message: str, triangle: str | None = None):
        super().__init__(message)
        self.triangle = triangle


class UnsupportedOperation(DagrelError, NotImplementedError):
    pass


# ---------------------------------------------------------------------------
# Diagram carriers
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Op:
    """A morphism of the opposite category: ``Op(f) : f.cod -> f.dom``."""

    inner: Any

    @property
    def dom(self):
        return self.inner.cod

    @property
    def cod(self):
        return self.inner.dom

    def to_json(self):
        return {"op": to_jsonable(self.inner)}

    def __repr__(self):
        return f"Op({self.inner!r})"


@dataclass(frozen=True, eq=False)
class Span:
    """Two morphisms out of a common apex: ``left : X -> A``, ``right : X -> B``."""

    left: Any
    right: Any

    def __post_init__(self):
        if self.left.dom != self.right.dom:
            raise CompositionError(
                f"span legs have different domains {self.left.dom!r} and {self.right.dom!r}")

    @property
    def apex(self):
        return self.left.dom

    def swap(self) -> "Span":
        return Span(self.right, self.left)

    def to_json(self):
        return {"apex": to_jsonable(self.apex), "left": to_jsonable(self.left),
                "right": to_jsonable(self.right)}


@dataclass(frozen=True, eq=False)
class Cospan:
    """Two morphisms into a common apex: ``left : A -> X``, ``right : B -> X``."""

    left: Any
    right: Any

    def __post_init__(self):
        if self.left.cod != self.right.cod:
            raise CompositionError(
                f"cospan legs have different codomains {self.left.cod!r} and {self.right.cod!r}")

    @property
    def apex(self):
        return self.left.cod

    def swap(self) -> "Cospan":
        return Cospan(self.right, self.left)

    def to_json(self):
        return {"apex": to_jsonable(self.apex), "left": to_jsonable(self.left),
                "right": to_jsonable(self.right)}


@dataclass(frozen=True, eq=False)
class Square:
    """A square with ``f`` left (X->A), ``g`` top (X->B), ``u`` bottom (A->C), ``v`` right (B->C).

    Commutation ``uf = vg`` is not enforced here; independence implies it.
    """

    f: Any
    g: Any
    u: Any
    v: Any

    def __post_init__(self):
        f, g, u, v = self.f, self.g, self.u, self.v
        if f.dom != g.dom or f.cod != u.dom or g.cod != v.dom or u.cod != v.cod:
            raise CompositionError("square edges do not line up")

    @property
    def span(self) -> Span:
        return Span(self.f, self.g)

    @property
    def cospan(self) -> Cospan:
        return Cospan(self.u, self.v)

    def transpose(self) -> "Square":
        return Square(self.g, self.f, self.v, self.u)

    def to_json(self):
        return {k: to_jsonable(getattr(self, k)) for k in ("f", "g", "u", "v")}


def op_square(sq: Square) -> Square:
    """The square of the base category underlying a square of ``Op`` morphisms."""
    return Square(sq.u.inner, sq.v.inner, sq.f.inner, sq.g.inner)


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer, np.floating)):
        return obj.item()
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    return repr(obj)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class Report:
    """Outcome of a law-checking suite.  ``failed == 0`` iff ``witnesses`` is empty."""

    suite: str
    seed: Optional[int] = None
    checked: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    witnesses: list = field(default_factory=list)
    incomplete: bool = False
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, law: str, **witness) -> bool:
        self.checked += 1
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append({"law": law, **{k: to_jsonable(v) for k, v in witness.items()}})
        return ok

    def check(self, law: str, thunk: Callable[[], bool], **witness) -> bool:
        """Evaluate ``thunk``; an exception counts as a violation."""
        try:
            ok = bool(thunk())
        except DagrelError as exc:
            return self.record(False, law, error=f"{type(exc).__name__}: {exc}", **witness)
        return self.record(ok, law, **witness)

    def skip(self, n: int = 1):
        self.skipped += n

    def merge(self, other: "Report") -> "Report":
        self.checked += other.checked
        self.passed += other.passed
        self.failed += other.failed
        self.skipped += other.skipped
        self.incomplete = self.incomplete or other.incomplete
        self.wall_time += other.wall_time
        room = MAX_WITNESSES - len(self.witnesses)
        self.witnesses.extend(other.witnesses[:max(room, 0)])
        return self

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = " (incomplete)" if self.incomplete else ""
        return (f"[{status}] {self.suite}: checked={self.checked} passed={self.passed} "
                f"failed={self.failed} skipped={self.skipped}{extra}")

    def to_json(self, timing: bool = False) -> dict:
        out = {"suite": self.suite, "seed": self.seed, "checked": self.checked,
               "passed": self.passed, "failed": self.failed, "skipped": self.skipped,
               "incomplete": self.incomplete, "witnesses": self.witnesses}
        if timing:
            out["wall_time"] = self.wall_time
        return out


class _Timer:
    def __init__(self, report: Report):
        self.report = report

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.wall_time += time.perf_counter() - self.t0
        return False


def timed(report: Report) -> _Timer:
    return _Timer(report)


# ---------------------------------------------------------------------------
# Dagger categories
# ---------------------------------------------------------------------------


class DaggerCategory(ABC):
    """A dilatory dagger category.

    Subclasses implement the four structural operations, ``validate``, at
    least one of ``dilator``/``codilator`` and at least one of
    ``mediate``/``comediate``; the other of each pair is derived through the
    dagger.  Samplers take a :class:`random.Random`.
    """

    name: str = "dagger-category"
    exact: bool = True

    @abstractmethod
    def identity(self, X): ...

    @abstractmethod
    def compose(self, g, f): ...

    @abstractmethod
    def dagger(self, f): ...

    @abstractmethod
    def mor_eq(self, f, g) -> bool: ...

    @abstractmethod
    def validate(self, f) -> None: ...

    def validate_object(self, X) -> None:
        return None

    # dilators -------------------------------------------------------------

    def dilator(self, r) -> Span:
        if type(self).codilator is DaggerCategory.codilator:
            raise UnsupportedOperation(f"{self.name} defines neither dilator nor codilator")
        c = self.codilator(r)
        return Span(self.dagger(c.left), self.dagger(c.right))

    def codilator(self, r) -> Cospan:
        if type(self).dilator is DaggerCategory.dilator:
            raise UnsupportedOperation(f"{self.name} defines neither dilator nor codilator")
        d = self.dilator(r)
        return Cospan(self.dagger(d.left), self.dagger(d.right))

    def mediate(self, dilator: Span, dilation: Span):
        """The coisometry ``e`` with ``dilator.left e = dilation.left`` and likewise on the right."""
        if type(self).comediate is DaggerCategory.comediate:
            raise UnsupportedOperation(f"{self.name} defines neither mediate nor comediate")
        c = self.comediate(Cospan(self.dagger(dilator.left), self.dagger(dilator.right)),
                           Cospan(self.dagger(dilation.left), self.dagger(dilation.right)))
        return self.dagger(c)

    def comediate(self, codilator: Cospan, codilation: Cospan):
        """The isometry ``c`` with ``c codilator.left = codilation.left`` and likewise on the right."""
        if type(self).mediate is DaggerCategory.mediate:
            raise UnsupportedOperation(f"{self.name} defines neither mediate nor comediate")
        e = self.mediate(Span(self.dagger(codilator.left), self.dagger(codilator.right)),
                         Span(self.dagger(codilation.left), self.dagger(codilation.right)))
        return self.dagger(e)

    def is_jointly_monic(self, span: Span) -> bool:
        """Joint monicity of a span of coisometries inside the coisometry subcategory."""
        return jointly_monic_via_dilator(self, span)

    def is_jointly_epic(self, cospan: Cospan) -> bool:
        return self.is_jointly_monic(Span(self.dagger(cospan.left), self.dagger(cospan.right)))

    def span_key(self, span: Span) -> Optional[Hashable]:
        """Normal form of a jointly monic span of coisometries, or None if unavailable."""
        return None

    def cospan_key(self, cospan: Cospan) -> Optional[Hashable]:
        return None

    # enumeration and sampling ----------------------------------------------

    def objects_up_to(self, n: int) -> list:
        raise UnsupportedOperation(f"{self.name} has no object enumeration")

    def hom(self, X, Y) -> Iterable:
        raise UnsupportedOperation(f"{self.name} has no finite hom-sets")

    def random_object(self, rng: random.Random):
        raise UnsupportedOperation(f"{self.name} has no sampler")

    def random_morphism(self, rng: random.Random, dom=None, cod=None):
        raise UnsupportedOperation(f"{self.name} has no sampler")

    def random_coisometry(self, rng: random.Random, dom=None, cod=None):
        if type(self).random_isometry is DaggerCategory.random_isometry:
            raise UnsupportedOperation(f"{self.name} has no coisometry sampler")
        return self.dagger(self.random_isometry(rng, dom=cod, cod=dom))

    def random_isometry(self, rng: random.Random, dom=None, cod=None):
        if type(self).random_coisometry is DaggerCategory.random_coisometry:
            raise UnsupportedOperation(f"{self.name} has no isometry sampler")
        return self.dagger(self.random_coisometry(rng, dom=cod, cod=dom))

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


def is_isometry(cat: DaggerCategory, f) -> bool:
    cat.validate(f)
    return cat.mor_eq(cat.compose(cat.dagger(f), f), cat.identity(f.dom))


def is_coisometry(cat: DaggerCategory, f) -> bool:
    cat.validate(f)
    return cat.mor_eq(cat.compose(f, cat.dagger(f)), cat.identity(f.cod))


def is_unitary(cat: DaggerCategory, f) -> bool:
    return is_isometry(cat, f) and is_coisometry(cat, f)


def jointly_monic_via_dilator(cat: DaggerCategory, span: Span) -> bool:
    """A span of coisometries is jointly monic iff it is a dilator of ``right left^dagger``.

    Decided by mediating it into the category's own dilator and asking
    whether the mediator is unitary.
    """
    r = cat.compose(span.right, cat.dagger(span.left))
    ref = cat.dilator(r)
    try:
        e = cat.mediate(ref, span)
    except MediationError:
        return False
    return is_unitary(cat, e)


class DualCategory(DaggerCategory):
    """The opposite of a dagger category, with morphisms wrapped in :class:`Op`.

    Isometries of the base become coisometries here, and codilators of the
    base become dilators.
    """

    def __init__(self, base: DaggerCategory):
        self.base = base
        self.name = f"dual({base.name})"
        self.exact = base.exact

    def _unwrap(self, f):
        if not isinstance(f, Op):
            raise ValidationError(f"{self.name} expects Op-wrapped morphisms, got {type(f).__name__}")
        return f.inner

    def identity(self, X):
        return Op(self.base.identity(X))

    def compose(self, g, f):
        if f.cod != g.dom:
            raise CompositionError(f"cannot compose {g!r} after {f!r}")
        return Op(self.base.compose(self._unwrap(f), self._unwrap(g)))

    def dagger(self, f):
        return Op(self.base.dagger(self._unwrap(f)))

    def mor_eq(self, f, g) -> bool:
        return self.base.mor_eq(self._unwrap(f), self._unwrap(g))

    def validate(self, f) -> None:
        self.base.validate(self._unwrap(f))

    def validate_object(self, X) -> None:
        self.base.validate_object(X)

    def dilator(self, r) -> Span:
        c = self.base.codilator(self._unwrap(r))
        return Span(Op(c.right), Op(c.left))

    def codilator(self, r) -> Cospan:
        d = self.base.dilator(self._unwrap(r))
        return Cospan(Op(d.right), Op(d.left))

    def mediate(self, dilator: Span, dilation: Span):
        u = self._unwrap
        return Op(self.base.comediate(Cospan(u(dilator.left), u(dilator.right)),
                                      Cospan(u(dilation.left), u(dilation.right))))

    def comediate(self, codilator: Cospan, codilation: Cospan):
        u = self._unwrap
        return Op(self.base.mediate(Span(u(codilator.left), u(codilator.right)),
                                    Span(u(codilation.left), u(codilation.right))))

    def is_jointly_monic(self, span: Span) -> bool:
        return self.base.is_jointly_epic(Cospan(self._unwrap(span.left), self._unwrap(span.right)))

    def is_jointly_epic(self, cospan: Cospan) -> bool:
        return self.base.is_jointly_monic(Span(self._unwrap(cospan.left), self._unwrap(cospan.right)))

    def span_key(self, span: Span):
        return self.base.cospan_key(Cospan(self._unwrap(span.left), self._unwrap(span.right)))

    def cospan_key(self, cospan: Cospan):
        return self.base.span_key(Span(self._unwrap(cospan.left), self._unwrap(cospan.right)))

    def objects_up_to(self, n: int) -> list:
        return self.base.objects_up_to(n)

    def hom(self, X, Y):
        return (Op(f) for f in self.base.hom(Y, X))

    def random_object(self, rng):
        return self.base.random_object(rng)

    def random_morphism(self, rng, dom=None, cod=None):
        return Op(self.base.random_morphism(rng, dom=cod, cod=dom))

    def random_coisometry(self, rng, dom=None, cod=None):
        return Op(self.base.random_isometry(rng, dom=cod, cod=dom))

    def random_isometry(self, rng, dom=None, cod=None):
        return Op(self.base.random_coisometry(rng, dom=cod, cod=dom))

    def __getattr__(self, item):
        # tolerance configs and similar plain attributes pass through
        if item.startswith("_") or item == "base":
            raise AttributeError(item)
        return getattr(self.base, item)


def dualize(cat: DaggerCategory) -> DualCategory:
    return DualCategory(cat)


# ---------------------------------------------------------------------------
# Dilators
# ---------------------------------------------------------------------------


def is_dilation(cat: DaggerCategory, r, span: Span) -> bool:
    if span.left.cod != r.dom or span.right.cod != r.cod:
        return False
    return (is_coisometry(cat, span.left) and is_coisometry(cat, span.right)
            and cat.mor_eq(cat.compose(span.right, cat.dagger(span.left)), r))


def mediate(cat: DaggerCategory, dilator: Span, dilation: Span):
    """Mediating coisometry from ``dilation`` into ``dilator``, with both triangles checked."""
    e = cat.mediate(dilator, dilation)
    if not cat.mor_eq(cat.compose(dilator.left, e), dilation.left):
        raise MediationError("left triangle fails", triangle="dilator.left . e = dilation.left")
    if not cat.mor_eq(cat.compose(dilator.right, e), dilation.right):
        raise MediationError("right triangle fails", triangle="dilator.right . e = dilation.right")
    if not is_coisometry(cat, e):
        raise MediationError("mediator is not coisometric", triangle="e e^dagger = 1")
    return e


def verify_dilator(cat: DaggerCategory, r, cand: Span, alt_dilations: Sequence[Span] = (),
                   report: Optional[Report] = None) -> bool:
    """Decide whether ``cand`` is a dilator of ``r``.

    Checks the dilation equation, joint monicity of ``cand`` (which makes
    it terminal among dilations), and mediation from each supplied
    alternative dilation.  Raises :class:`PreconditionError` when the legs
    are not coisometries out of the right objects.
    """
    cat.validate(r)
    if cand.left.cod != r.dom or cand.right.cod != r.cod:
        raise PreconditionError("candidate legs do not land on the domain and codomain of r")
    if not (is_coisometry(cat, cand.left) and is_coisometry(cat, cand.right)):
        raise PreconditionError("candidate legs are not coisometries")
    rep = report if report is not None else Report("verify_dilator")
    ok = rep.check("dilation equation",
                   lambda: cat.mor_eq(cat.compose(cand.right, cat.dagger(cand.left)), r), r=r)
    ok &= rep.check("jointly monic", lambda: cat.is_jointly_monic(cand), r=r, cand=cand)
    for alt in alt_dilations:
        if not is_dilation(cat, r, alt):
            rep.skip()
            continue
        ok &= rep.check("mediation", lambda: mediate(cat, cand, alt) is not None, r=r, alt=alt)
    return bool(ok)


# ---------------------------------------------------------------------------
# Epi-regular independence categories
# ---------------------------------------------------------------------------


class EpiRegularCategory(ABC):
    """An independence category with independent pullbacks and span factorisations."""

    name: str = "epi-regular"
    exact: bool = True
    dagger_base: Optional[DaggerCategory] = None

    @abstractmethod
    def identity(self, X): ...

    @abstractmethod
    def compose(self, g, f): ...

    @abstractmethod
    def mor_eq(self, f, g) -> bool: ...

    @abstractmethod
    def is_independent(self, sq: Square) -> bool: ...

    @abstractmethod
    def independent_pullback(self, cospan: Cospan) -> Span: ...

    @abstractmethod
    def factorize(self, span: Span) -> tuple[Any, Span]:
        """Return ``(e, m)`` with ``m`` jointly monic and ``m.left e = span.left``, ``m.right e = span.right``."""

    @abstractmethod
    def is_jointly_monic(self, span: Span) -> bool: ...

    @abstractmethod
    def lift(self, target: Span, source: Span):
        """The unique ``e`` with ``target.left e = source.left`` and ``target.right e = source.right``.

        ``target`` must be jointly monic; raises :class:`MediationError` when no such ``e`` exists.
        """

    @abstractmethod
    def is_iso(self, f) -> bool: ...

    def validate(self, f) -> None:
        return None

    def commutes(self, sq: Square) -> bool:
        return self.mor_eq(self.compose(sq.u, sq.f), self.compose(sq.v, sq.g))

    def inverse(self, f):
        """Inverse of an isomorphism; in a category of coisometries this is the dagger."""
        if self.dagger_base is None or not self.is_iso(f):
            raise PreconditionError("not an invertible morphism")
        return self.dagger_base.dagger(f)

    def random_object(self, rng: random.Random):
        raise UnsupportedOperation(f"{self.name} has no sampler")

    def random_morphism(self, rng: random.Random, dom=None, cod=None):
        raise UnsupportedOperation(f"{self.name} has no sampler")

    def is_independent_pullback(self, sq: Square) -> bool:
        """Independent and universal: the span lifts isomorphically onto the chosen pullback."""
        if not self.is_independent(sq):
            return False
        pb = self.independent_pullback(sq.cospan)
        try:
            e = self.lift(pb, sq.span)
        except MediationError:
            return False
        return self.is_iso(e)

    def span_key(self, span: Span) -> Optional[Hashable]:
        return None

    def terminal(self):
        raise UnsupportedOperation(f"{self.name} has no terminal object")

    def to_terminal(self, X):
        raise UnsupportedOperation(f"{self.name} has no terminal object")

    def pushout(self, span: Span) -> Cospan:
        raise UnsupportedOperation(f"{self.name} has no pushouts")

    def objects_up_to(self, n: int) -> list:
        raise UnsupportedOperation(f"{self.name} has no object enumeration")

    def hom(self, X, Y) -> Iterable:
        raise UnsupportedOperation(f"{self.name} has no finite hom-sets")

    def quotients(self, X) -> Iterable:
        """Morphisms out of X, one per isomorphism class of codomain-side factorisation."""
        raise UnsupportedOperation(f"{self.name} cannot enumerate quotients")

    def diagonal_filler(self, m: Span, f, g):
        """Some ``d`` with ``m.left d = f`` and ``m.right d = g``, by exhaustive search; None if absent."""
        for d in self.hom(f.dom, m.apex):
            if self.mor_eq(self.compose(m.left, d), f) and self.mor_eq(self.compose(m.right, d), g):
                return d
        return None

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class CoisomCategory(EpiRegularCategory):
    """Coisometries of a dilatory dagger category, with structure read off the dagger.

    A square is independent when ``uf = vg`` and ``g f^dagger = v^dagger u``;
    the independent pullback of ``(u, v)`` is the dilator of
    ``v^dagger u``; a span ``(f, g)`` factors through the dilator of
    ``g f^dagger``.
    """

    def __init__(self, base: DaggerCategory):
        self.base = base
        self.dagger_base = base
        self.name = f"Coisom({base.name})"
        self.exact = base.exact

    def identity(self, X):
        return self.base.identity(X)

    def compose(self, g, f):
        return self.base.compose(g, f)

    def mor_eq(self, f, g) -> bool:
        return self.base.mor_eq(f, g)

    def validate(self, f) -> None:
        if not is_coisometry(self.base, f):
            raise ValidationError(f"{f!r} is not a coisometry of {self.base.name}")

    def is_independent(self, sq: Square) -> bool:
        D = self.base
        if not self.commutes(sq):
            return False
        return D.mor_eq(D.compose(sq.g, D.dagger(sq.f)), D.compose(D.dagger(sq.v), sq.u))

    def independent_pullback(self, cospan: Cospan) -> Span:
        D = self.base
        return D.dilator(D.compose(D.dagger(cospan.right), cospan.left))

    def factorize(self, span: Span):
        D = self.base
        m = D.dilator(D.compose(span.right, D.dagger(span.left)))
        return D.mediate(m, span), m

    def is_jointly_monic(self, span: Span) -> bool:
        return jointly_monic_via_dilator(self.base, span)

    def lift(self, target: Span, source: Span):
        D = self.base
        r_t = D.compose(target.right, D.dagger(target.left))
        r_s = D.compose(source.right, D.dagger(source.left))
        if not D.mor_eq(r_t, r_s):
            raise MediationError("source is not a dilation of the target's morphism",
                                 triangle="right left^dagger")
        return mediate(D, target, source)

    def is_iso(self, f) -> bool:
        return is_unitary(self.base, f)

    def span_key(self, span: Span):
        return self.base.span_key(span)

    def hom(self, X, Y):
        return (f for f in self.base.hom(X, Y) if is_coisometry(self.base, f))

    def objects_up_to(self, n: int) -> list:
        return self.base.objects_up_to(n)

    def random_object(self, rng):
        return self.base.random_object(rng)

    def random_morphism(self, rng, dom=None, cod=None):
        return self.base.random_coisometry(rng, dom=dom, cod=cod)


# ---------------------------------------------------------------------------
# Law checkers
# ---------------------------------------------------------------------------


def composable_pairs(cat: DaggerCategory, rng: random.Random) -> Iterator[tuple[Any, Any]]:
    """Endless stream of ``(s, r)`` with ``r.cod == s.dom``."""
    while True:
        r = cat.random_morphism(rng)
        s = cat.random_morphism(rng, dom=r.cod)
        yield s, r


def check_dagger_axioms(cat: DaggerCategory, sampler: Iterable, n_samples: int,
                        seed: Optional[int] = None) -> Report:
    """Check ``1^dagger = 1``, ``(sr)^dagger = r^dagger s^dagger`` and ``r^dagger^dagger = r``.

    ``sampler`` yields composable pairs ``(s, r)``; running dry before
    ``n_samples`` flags the report incomplete.
    """
    rep = Report(f"dagger-axioms[{cat.name}]", seed=seed)
    it = iter(sampler)
    with timed(rep):
        for _ in range(n_samples):
            try:
                s, r = next(it)
            except StopIteration:
                rep.incomplete = True
                break

            def valid(s=s, r=r):
                cat.validate(r)
                cat.validate(s)
                return True

            if not rep.check("valid sample", valid, s=s, r=r):
                continue
            rep.check("identity", lambda: cat.mor_eq(cat.dagger(cat.identity(r.dom)),
                                                     cat.identity(r.dom)), r=r)
            rep.check("involution", lambda: cat.mor_eq(cat.dagger(cat.dagger(r)), r), r=r)

            def contravariant(s=s, r=r):
                rd, sd = cat.dagger(r), cat.dagger(s)
                if rd.dom != r.cod or rd.cod != r.dom:
                    return False
                return cat.mor_eq(cat.dagger(cat.compose(s, r)), cat.compose(rd, sd))

            rep.check("contravariance", contravariant, s=s, r=r)
    return rep


@dataclass(frozen=True, eq=False)
class Pasting:
    """Two squares glued horizontally: ``left.v`` is ``right.f``."""

    left: Square
    right: Square

    def outer(self, compose) -> Square:
        return Square(self.left.f, compose(self.right.g, self.left.g),
                      compose(self.right.u, self.left.u), self.right.v)


def check_independence_axioms(C: EpiRegularCategory, square_supply: Iterable, n: int,
                              seed: Optional[int] = None) -> Report:
    """Check the independence axioms on supplied squares and pastings.

    Items of ``square_supply`` are :class:`Square` or :class:`Pasting`.  For
    every square the predicate must be transpose-invariant; independent
    squares must commute; each edge ``f`` yields the identity square
    ``(f, 1, 1, f)`` and the degenerate square ``(f, f, 1, 1)``, both of
    which must be independent; a pasting of independent squares must be
    independent.
    """
    rep = Report(f"independence-axioms[{C.name}]", seed=seed)
    it = iter(square_supply)
    with timed(rep):
        for _ in range(n):
            try:
                item = next(it)
            except StopIteration:
                rep.incomplete = True
                break
            if isinstance(item, Pasting):
                if not C.mor_eq(item.left.v, item.right.f):
                    rep.skip()
                    continue
                if C.is_independent(item.left) and C.is_independent(item.right):
                    rep.check("I3 pasting", lambda: C.is_independent(item.outer(C.compose)),
                              left=item.left, right=item.right)
                else:
                    rep.skip()
                continue
            sq = item
            ind = C.is_independent(sq)
            if ind:
                rep.check("I1 commutes", lambda: C.commutes(sq), square=sq)
            rep.check("I4 transpose", lambda: C.is_independent(sq.transpose()) == ind, square=sq)
            f = sq.f
            rep.check("I2 identity square",
                      lambda: C.is_independent(Square(f, C.identity(f.dom), C.identity(f.cod), f)),
                      f=f)
            rep.check("I5 degenerate square",
                      lambda: C.is_independent(Square(f, f, C.identity(f.cod), C.identity(f.cod))),
                      f=f)
    return rep
