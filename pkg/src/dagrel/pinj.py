"""Finite sets and injective partial functions.

``PInj`` is a dagger category whose isometries are the total injections.
It has codilators built from a disjoint union, so its dilators are
obtained through :func:`dagrel.core.dualize`.  The epi-regular category
paired with it is ``Inj^op``, presented directly by :class:`InjOp` on
:class:`~dagrel.core.Op`-wrapped total injections.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Iterator, Optional

from .core import (
    CompositionError, Cospan, DaggerCategory, EpiRegularCategory, MediationError, Op,
    PreconditionError, Span, Square, ValidationError, dualize, op_square,
)
from .finset import FinSet, finset_range


@dataclass(frozen=True)
class PartialInjection:
    """Pairs ``(a, b)`` with each ``a`` and each ``b`` used at most once."""

    dom: FinSet
    cod: FinSet
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset((str(a), str(b)) for a, b in self.pairs)
        seen_a, seen_b = set(), set()
        for a, b in sorted(pairs):
            if a not in self.dom:
                raise ValidationError(f"{a!r} is not in the domain")
            if b not in self.cod:
                raise ValidationError(f"{b!r} is not in the codomain")
            if a in seen_a:
                raise ValidationError(f"{a!r} has two images (not a partial function)")
            if b in seen_b:
                raise ValidationError(f"{b!r} has two preimages (not injective)")
            seen_a.add(a)
            seen_b.add(b)
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_dict(cls, dom: FinSet, cod: FinSet, fn: dict) -> "PartialInjection":
        return cls(dom, cod, frozenset(fn.items()))

    def as_dict(self) -> dict[str, str]:
        return dict(self.pairs)

    def __call__(self, a: str) -> Optional[str]:
        return self.as_dict().get(a)

    @property
    def support(self) -> frozenset:
        return frozenset(a for a, _ in self.pairs)

    @property
    def range(self) -> frozenset:
        return frozenset(b for _, b in self.pairs)

    def is_total(self) -> bool:
        return len(self.pairs) == len(self.dom)

    def validate(self) -> None:
        return None

    def to_json(self) -> dict:
        return {"dom": self.dom.to_json(), "cod": self.cod.to_json(),
                "pairs": [list(p) for p in sorted(self.pairs)]}

    @classmethod
    def from_json(cls, obj: dict) -> "PartialInjection":
        try:
            dom, cod = FinSet(tuple(obj["dom"])), FinSet(tuple(obj["cod"]))
            raw = obj["pairs"]
        except KeyError as exc:
            raise ValidationError(f"missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise ValidationError(str(exc)) from None
        if not isinstance(raw, list) or any(not isinstance(p, list) or len(p) != 2 for p in raw):
            raise ValidationError("field 'pairs' must be a list of two-element lists")
        if len({tuple(p) for p in raw}) != len(raw):
            raise ValidationError("field 'pairs' repeats a pair")
        return cls(dom, cod, frozenset(tuple(p) for p in raw))

    def __repr__(self):
        body = ", ".join(f"{a}->{b}" for a, b in sorted(self.pairs))
        return f"PartialInjection({body})"


def pi_identity(X: FinSet) -> PartialInjection:
    return PartialInjection(X, X, frozenset((a, a) for a in X))


def pi_compose(s: PartialInjection, r: PartialInjection) -> PartialInjection:
    if r.cod != s.dom:
        raise CompositionError(f"codomain {r.cod!r} does not match domain {s.dom!r}")
    sd = s.as_dict()
    return PartialInjection(r.dom, s.cod, frozenset((a, sd[b]) for a, b in r.pairs if b in sd))


def pi_dagger(r: PartialInjection) -> PartialInjection:
    return PartialInjection(r.cod, r.dom, frozenset((b, a) for a, b in r.pairs))


def pi_restriction(r: PartialInjection) -> PartialInjection:
    """The partial identity on the support of ``r``."""
    return PartialInjection(r.dom, r.dom, frozenset((a, a) for a in r.support))


def pi_inclusion(S: FinSet, X: FinSet) -> PartialInjection:
    return PartialInjection(S, X, frozenset((a, a) for a in S))


def pi_codilator(r: PartialInjection) -> Cospan:
    """Codilator on ``(A minus supp r)`` disjoint-union ``B``.

    Labels are kept raw when the two parts do not collide and are tagged
    ``L:``/``R:`` otherwise.  Points of the support go where ``r`` sends them.
    """
    rest = [a for a in r.dom if a not in r.support]
    if set(rest) & set(r.cod):
        lab_a = {a: f"L:{a}" for a in rest}
        lab_b = {b: f"R:{b}" for b in r.cod}
    else:
        lab_a = {a: a for a in rest}
        lab_b = {b: b for b in r.cod}
    apex = FinSet(tuple(lab_a.values()) + tuple(lab_b.values()))
    rd = r.as_dict()
    i1 = PartialInjection(r.dom, apex, frozenset((a, lab_b[rd[a]] if a in rd else lab_a[a])
                                                 for a in r.dom))
    i2 = PartialInjection(r.cod, apex, frozenset((b, lab_b[b]) for b in r.cod))
    return Cospan(i1, i2)


def pi_comediate(codilator: Cospan, codilation: Cospan) -> PartialInjection:
    """The total injection ``c`` with ``c i1 = A`` and ``c i2 = B``."""
    c: dict[str, str] = {}
    for leg, tgt, side in ((codilator.left, codilation.left, "left"),
                           (codilator.right, codilation.right, "right")):
        td = tgt.as_dict()
        for a, x in leg.pairs:
            if a not in td:
                raise MediationError(f"{a!r} has no image under the {side} codilation leg",
                                     triangle=f"{side} triangle")
            if c.setdefault(x, td[a]) != td[a]:
                raise MediationError(f"apex point {x!r} is sent to two places",
                                     triangle=f"{side} triangle")
    missing = [x for x in codilator.apex if x not in c]
    if missing:
        raise MediationError(f"codilator is not jointly epic at {missing}",
                             triangle="jointly epic")
    if len(set(c.values())) != len(c):
        raise MediationError("mediator is not injective", triangle="c^dagger c = 1")
    return PartialInjection(codilator.apex, codilation.apex, frozenset(c.items()))


def inj_is_jointly_epic(cs: Cospan) -> bool:
    if not (cs.left.is_total() and cs.right.is_total()):
        return False
    return (cs.left.range | cs.right.range) == frozenset(cs.apex)


def inj_is_coindependent(sq: Square) -> bool:
    """A commuting square of total injections is co-independent iff Ran u and Ran v meet in Ran uf."""
    h = pi_compose(sq.u, sq.f)
    if h != pi_compose(sq.v, sq.g):
        return False
    return (sq.u.range & sq.v.range) == h.range


def inj_coind_pushout(sp: Span) -> Cospan:
    """Co-independent pushout of total injections ``u : C -> A``, ``v : C -> B``."""
    return pi_codilator(pi_compose(sp.right, pi_dagger(sp.left)))


def inj_cofactorize(cs: Cospan) -> tuple[PartialInjection, Cospan]:
    """Restrict to the union of the two images: ``(inclusion, jointly epic cospan)``."""
    f, g = cs.left, cs.right
    Y = FinSet(tuple(sorted(f.range | g.range)))
    e = pi_inclusion(Y, cs.apex)
    i1 = PartialInjection(f.dom, Y, f.pairs)
    i2 = PartialInjection(g.dom, Y, g.pairs)
    return e, Cospan(i1, i2)


# ---------------------------------------------------------------------------
# Enumeration and sampling
# ---------------------------------------------------------------------------


def all_partial_injections(X: FinSet, Y: FinSet) -> Iterator[PartialInjection]:
    xs, ys = list(X), list(Y)
    for k in range(min(len(xs), len(ys)) + 1):
        for src in combinations(xs, k):
            for tgt in permutations(ys, k):
                yield PartialInjection(X, Y, frozenset(zip(src, tgt)))


def all_total_injections(X: FinSet, Y: FinSet) -> Iterator[PartialInjection]:
    for tgt in permutations(list(Y), len(X)):
        yield PartialInjection(X, Y, frozenset(zip(X, tgt)))


def random_partial_injection(rng: random.Random, X: FinSet, Y: FinSet,
                             total: bool = False) -> PartialInjection:
    xs, ys = list(X), list(Y)
    if total and len(xs) > len(ys):
        raise PreconditionError(f"no injection from {len(xs)} into {len(ys)} elements")
    k = len(xs) if total else rng.randint(0, min(len(xs), len(ys)))
    src = rng.sample(xs, k)
    tgt = rng.sample(ys, k)
    return PartialInjection(X, Y, frozenset(zip(src, tgt)))


class PInj(DaggerCategory):
    name = "PInj"
    exact = True

    def __init__(self, max_size: int = 4):
        self.max_size = max_size

    def identity(self, X):
        return pi_identity(X)

    def compose(self, g, f):
        return pi_compose(g, f)

    def dagger(self, f):
        return pi_dagger(f)

    def mor_eq(self, f, g) -> bool:
        return f == g

    def validate(self, f) -> None:
        if not isinstance(f, PartialInjection):
            raise ValidationError(f"expected PartialInjection, got {type(f).__name__}")

    def codilator(self, r) -> Cospan:
        return pi_codilator(r)

    def comediate(self, codilator: Cospan, codilation: Cospan):
        return pi_comediate(codilator, codilation)

    def is_jointly_epic(self, cospan: Cospan) -> bool:
        return inj_is_jointly_epic(cospan)

    def cospan_key(self, cospan: Cospan):
        if not inj_is_jointly_epic(cospan):
            return None
        r = pi_compose(pi_dagger(cospan.right), cospan.left)
        return ("pinj", r.dom, r.cod, r.pairs)

    def objects_up_to(self, n: int) -> list:
        return [finset_range(k) for k in range(n + 1)]

    def hom(self, X, Y):
        return all_partial_injections(X, Y)

    def random_object(self, rng):
        return finset_range(rng.randint(0, self.max_size))

    def random_morphism(self, rng, dom=None, cod=None):
        dom = self.random_object(rng) if dom is None else dom
        cod = self.random_object(rng) if cod is None else cod
        return random_partial_injection(rng, dom, cod)

    def random_isometry(self, rng, dom=None, cod=None):
        if dom is None:
            dom = finset_range(rng.randint(0, self.max_size if cod is None else len(cod)))
        if cod is None:
            cod = finset_range(rng.randint(len(dom), max(len(dom), self.max_size)))
        return random_partial_injection(rng, dom, cod, total=True)


class InjOp(EpiRegularCategory):
    """The opposite of finite sets and injections, on ``Op``-wrapped total injections.

    A morphism ``Op(j) : X -> A`` wraps an injection ``j : A -> X``.  Squares
    are independent when the underlying square of injections has ``Ran u``
    and ``Ran v`` meeting exactly in the image of the diagonal.
    """

    name = "Inj^op"
    exact = True

    def __init__(self, base: PInj | None = None):
        self.pinj = base if base is not None else PInj()
        self.dagger_base = dualize(self.pinj)

    def identity(self, X):
        return Op(pi_identity(X))

    def compose(self, g, f):
        if f.cod != g.dom:
            raise CompositionError(f"cannot compose {g!r} after {f!r}")
        return Op(pi_compose(f.inner, g.inner))

    def mor_eq(self, f, g) -> bool:
        return f.inner == g.inner

    def validate(self, f) -> None:
        if not isinstance(f, Op) or not isinstance(f.inner, PartialInjection):
            raise ValidationError("morphisms of Inj^op are Op-wrapped partial injections")
        if not f.inner.is_total():
            raise ValidationError("underlying partial injection is not total")

    def is_independent(self, sq: Square) -> bool:
        return inj_is_coindependent(op_square(sq))

    def independent_pullback(self, cospan: Cospan) -> Span:
        c = inj_coind_pushout(Span(cospan.left.inner, cospan.right.inner))
        return Span(Op(c.left), Op(c.right))

    def factorize(self, span: Span):
        e, cs = inj_cofactorize(Cospan(span.left.inner, span.right.inner))
        return Op(e), Span(Op(cs.left), Op(cs.right))

    def is_jointly_monic(self, span: Span) -> bool:
        return inj_is_jointly_epic(Cospan(span.left.inner, span.right.inner))

    def lift(self, target: Span, source: Span):
        c = pi_comediate(Cospan(target.left.inner, target.right.inner),
                         Cospan(source.left.inner, source.right.inner))
        return Op(c)

    def is_iso(self, f) -> bool:
        return f.inner.is_total() and len(f.inner.dom) == len(f.inner.cod)

    def inverse(self, f):
        if not self.is_iso(f):
            raise PreconditionError("not a bijection")
        return Op(pi_dagger(f.inner))

    def terminal(self):
        return finset_range(0)

    def to_terminal(self, X):
        return Op(pi_inclusion(finset_range(0), X))

    def span_key(self, span: Span):
        return self.pinj.cospan_key(Cospan(span.left.inner, span.right.inner))

    def objects_up_to(self, n: int) -> list:
        return [finset_range(k) for k in range(n + 1)]

    def hom(self, X, Y) -> Iterable:
        return (Op(j) for j in all_total_injections(Y, X))

    def quotients(self, X):
        xs = list(X)
        for k in range(len(xs) + 1):
            for sub in combinations(xs, k):
                yield Op(pi_inclusion(FinSet(sub), X))

    def random_object(self, rng):
        return self.pinj.random_object(rng)

    def random_morphism(self, rng, dom=None, cod=None):
        return Op(self.pinj.random_isometry(rng, dom=cod, cod=dom))
