"""Relations in an epi-regular independence category, and the equivalence with the dagger side.

A relation ``A -> B`` is a jointly monic span ``(r1, r2)`` considered up
to isomorphism of spans.  Composition takes the independent pullback of
the inner legs, composes the outer legs and keeps the jointly monic part
of their factorisation; the dagger swaps the legs.  When the base is the
category of coisometries of a dagger category ``D``, ``epsilon`` sends
``[r1, r2]`` to ``r2 r1^dagger`` in ``D`` and ``eta`` sends ``f`` to
``[1, f]``; :func:`roundtrip_check` verifies that the two are mutually
inverse on samples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Optional

from .core import (
    CompositionError, Cospan, DaggerCategory, DagrelError, EpiRegularCategory, PreconditionError,
    Report, Span, UnsupportedOperation, ValidationError, is_coisometry, timed, to_jsonable,
)


@dataclass(frozen=True, eq=False)
class Relation:
    """A relation ``source -> target`` represented by a jointly monic span."""

    source: Any
    target: Any
    rep: Span

    def __post_init__(self):
        if self.rep.left.cod != self.source or self.rep.right.cod != self.target:
            raise CompositionError("representative legs do not land on source and target")

    @property
    def dom(self):
        return self.source

    @property
    def cod(self):
        return self.target

    @property
    def apex(self):
        return self.rep.apex

    def to_json(self) -> dict:
        return {"source": to_jsonable(self.source), "target": to_jsonable(self.target),
                "rep": to_jsonable(self.rep)}

    def __repr__(self):
        return f"Relation[{self.rep.left!r}, {self.rep.right!r}]"


@dataclass(frozen=True, eq=False)
class CompositionTrace:
    """Every intermediate of one relation composite."""

    pullback: Span
    outer: Span
    epi: Any
    result: Span
    factorised: bool

    def to_json(self) -> dict:
        return {"independent_pullback": to_jsonable(self.pullback),
                "outer_span": to_jsonable(self.outer),
                "factorisation_epi": to_jsonable(self.epi),
                "jointly_monic_part": to_jsonable(self.result),
                "factorised": self.factorised}


class RelCategory(DaggerCategory):
    """``Rel(C)`` for an epi-regular independence category ``C``."""

    def __init__(self, C: EpiRegularCategory, factorize_composites: bool = True):
        if not isinstance(C, EpiRegularCategory):
            raise UnsupportedOperation("relations need an epi-regular independence category")
        self.C = C
        self.factorize_composites = factorize_composites
        self.name = f"Rel({C.name})"
        self.exact = C.exact

    # construction ------------------------------------------------------------

    def relation(self, span: Span, check: bool = True) -> Relation:
        if check and not self.C.is_jointly_monic(span):
            raise ValidationError("representative span is not jointly monic")
        return Relation(span.left.cod, span.right.cod, span)

    def from_span(self, span: Span) -> Relation:
        """The relation of the jointly monic part of an arbitrary span."""
        _, m = self.C.factorize(span)
        return self.relation(m, check=False)

    def eta(self, f) -> Relation:
        return Relation(f.dom, f.cod, Span(self.C.identity(f.dom), f))

    def epsilon(self, r: Relation):
        D = self.C.dagger_base
        if D is None:
            raise UnsupportedOperation(f"{self.C.name} is not registered as a category of coisometries")
        return D.compose(r.rep.right, D.dagger(r.rep.left))

    def as_map(self, r: Relation):
        """The morphism ``f`` of ``C`` with ``r = [1, f]``; ``r`` must be coisometric."""
        if not self.C.is_iso(r.rep.left):
            raise PreconditionError("relation is not of the form [1, f]")
        return self.C.compose(r.rep.right, self.C.inverse(r.rep.left))

    # dagger category structure ---------------------------------------------------

    def identity(self, X):
        one = self.C.identity(X)
        return Relation(X, X, Span(one, one))

    def compose_traced(self, s: Relation, r: Relation) -> tuple[Relation, CompositionTrace]:
        if r.target != s.source:
            raise CompositionError(f"cannot compose relations through {r.target!r} and {s.source!r}")
        C = self.C
        pb = C.independent_pullback(Cospan(r.rep.right, s.rep.left))
        outer = Span(C.compose(r.rep.left, pb.left), C.compose(s.rep.right, pb.right))
        if self.factorize_composites:
            e, m = C.factorize(outer)
        else:
            e, m = None, outer
        out = Relation(r.source, s.target, m)
        return out, CompositionTrace(pb, outer, e, m, self.factorize_composites)

    def compose(self, g, f):
        return self.compose_traced(g, f)[0]

    def dagger(self, f):
        return Relation(f.target, f.source, f.rep.swap())

    def key(self, r: Relation):
        return self.C.span_key(r.rep)

    def mor_eq(self, f, g) -> bool:
        if f.source != g.source or f.target != g.target:
            return False
        if self.C.exact:
            kf, kg = self.key(f), self.key(g)
            if kf is not None and kg is not None:
                return kf == kg
        D = self.C.dagger_base
        if D is None:
            raise UnsupportedOperation("no canonical key and no epsilon to compare relations")
        return D.mor_eq(self.epsilon(f), self.epsilon(g))

    def validate(self, f) -> None:
        if not isinstance(f, Relation):
            raise ValidationError(f"expected Relation, got {type(f).__name__}")
        for leg in (f.rep.left, f.rep.right):
            self.C.validate(leg)
        if not self.C.is_jointly_monic(f.rep):
            raise ValidationError("representative span is not jointly monic")

    def dilator(self, r) -> Span:
        return Span(self.eta(r.rep.left), self.eta(r.rep.right))

    def mediate(self, dilator: Span, dilation: Span):
        target = Span(self.as_map(dilator.left), self.as_map(dilator.right))
        source = Span(self.as_map(dilation.left), self.as_map(dilation.right))
        return self.eta(self.C.lift(target, source))

    # sampling ------------------------------------------------------------------------

    def random_object(self, rng: random.Random):
        return self.C.random_object(rng)

    def random_morphism(self, rng, dom=None, cod=None):
        D = self.C.dagger_base
        if D is not None:
            return self.relation(D.dilator(D.random_morphism(rng, dom=dom, cod=cod)), check=False)
        X = self.C.random_object(rng)
        f = self.C.random_morphism(rng, dom=X, cod=dom)
        g = self.C.random_morphism(rng, dom=X, cod=cod)
        return self.from_span(Span(f, g))

    def random_coisometry(self, rng, dom=None, cod=None):
        return self.eta(self.C.random_morphism(rng, dom=dom, cod=cod))

    def objects_up_to(self, n: int) -> list:
        return self.C.objects_up_to(n)


def rel_identity(rel: RelCategory, X) -> Relation:
    return rel.identity(X)


def rel_compose(rel: RelCategory, s: Relation, r: Relation) -> Relation:
    return rel.compose(s, r)


def rel_dagger(rel: RelCategory, r: Relation) -> Relation:
    return rel.dagger(r)


def rel_eq(rel: RelCategory, r: Relation, s: Relation) -> bool:
    return rel.mor_eq(r, s)


def rel_dilator(rel: RelCategory, r: Relation) -> tuple[Relation, Relation]:
    d = rel.dilator(r)
    return d.left, d.right


@dataclass
class EquivalenceWitness:
    """Outcome of checking that ``eta`` and ``epsilon`` form an equivalence on samples."""

    base: DaggerCategory
    rel: RelCategory
    report: Report

    @property
    def ok(self) -> bool:
        return self.report.ok

    def eta(self, f) -> Relation:
        return self.rel.eta(f)

    def epsilon(self, r: Relation):
        return self.rel.epsilon(r)

    def to_json(self) -> dict:
        return {"base": self.base.name, "rel": self.rel.name, "report": self.report.to_json()}


def roundtrip_check(D: DaggerCategory, C: EpiRegularCategory, n: int, seed: Optional[int] = None,
                    rel: RelCategory | None = None) -> EquivalenceWitness:
    """Check ``epsilon`` functorial, full and faithful and ``eta`` an iso onto coisometries.

    For each of ``n`` composable pairs ``(s, r)`` of ``D`` the relations of
    their dilators are composed in ``Rel(C)``; the composite must be a
    genuine relation whose ``epsilon`` is ``sr``.  For a random coisometry
    ``f`` the triangle ``epsilon(eta f) = f`` is checked, together with
    ``eta f`` being coisometric and ``[r1, r2] = eta(r2) eta(r1)^dagger``.
    """
    if C.dagger_base is None:
        raise UnsupportedOperation("roundtrip needs C to be the coisometries of a dagger category")
    rel = rel if rel is not None else RelCategory(C)
    rep = Report(f"roundtrip[{D.name}]", seed=seed)
    rng = random.Random(seed)
    with timed(rep):
        for _ in range(n):
            r = D.random_morphism(rng)
            s = D.random_morphism(rng, dom=r.cod)
            R = rel.relation(D.dilator(r), check=False)
            S = rel.relation(D.dilator(s), check=False)
            rep.check("epsilon full (epsilon of dilator)", lambda: D.mor_eq(rel.epsilon(R), r), r=r)
            try:
                SR, tr = rel.compose_traced(S, R)
            except DagrelError as exc:
                rep.record(False, "composite exists", r=r, s=s, error=str(exc))
                continue
            rep.check("composite is a relation", lambda: C.is_jointly_monic(SR.rep), r=r, s=s)
            rep.check("epsilon functorial",
                      lambda: D.mor_eq(rel.epsilon(SR), D.compose(s, r)), r=r, s=s)
            rep.check("epsilon faithful",
                      lambda: rel.mor_eq(rel.relation(D.dilator(rel.epsilon(SR)), check=False), SR),
                      r=r, s=s)
            f = C.random_morphism(rng)
            rep.check("triangle epsilon(eta f) = f", lambda: D.mor_eq(rel.epsilon(rel.eta(f)), f), f=f)
            rep.check("eta f coisometric", lambda: is_coisometry(rel, rel.eta(f)), f=f)
            rep.check("relation = eta(r2) eta(r1)^dagger",
                      lambda: rel.mor_eq(rel.compose(rel.eta(SR.rep.right),
                                                     rel.dagger(rel.eta(SR.rep.left))), SR), r=r, s=s)
    return EquivalenceWitness(D, rel, rep)
