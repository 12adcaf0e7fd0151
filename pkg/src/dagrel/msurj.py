"""Finite sets with surjective multivalued functions, and the subcategory of surjections.

``MSurj`` is a dagger category under relational converse.  Its
coisometries are the single-valued surjections, which form ``Surj``; the
latter is presented directly as an epi-regular independence category by
:class:`Surj`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping

from .core import (
    CompositionError, Cospan, DaggerCategory, EpiRegularCategory, MediationError,
    PreconditionError, Span, Square, ValidationError,
)
from .finset import FinSet, finset_range, pair_label, set_partitions


@dataclass(frozen=True)
class MultiMap:
    """A relation ``dom -> cod`` stored as ``a -> frozenset of images``.

    The constructor checks shape only; :meth:`validate` checks the two
    invariants of a morphism of MSurj (nonempty rows, surjectivity).
    """

    dom: FinSet
    cod: FinSet
    table: tuple[tuple[str, frozenset], ...]

    def __post_init__(self):
        rows = dict(self.table)
        if set(rows) != set(self.dom):
            raise ValidationError(f"table keys {sorted(rows)} differ from domain {list(self.dom)}")
        norm = []
        for a in self.dom:
            img = frozenset(rows[a])
            stray = img - set(self.cod)
            if stray:
                raise ValidationError(f"row {a!r} maps outside the codomain: {sorted(stray)}")
            norm.append((a, img))
        object.__setattr__(self, "table", tuple(norm))

    @classmethod
    def from_dict(cls, dom: FinSet, cod: FinSet, rows: Mapping[str, Iterable]) -> "MultiMap":
        return cls(dom, cod, tuple((a, frozenset(rows.get(a, ()))) for a in dom))

    @classmethod
    def from_function(cls, dom: FinSet, cod: FinSet, fn: Mapping[str, str]) -> "MultiMap":
        return cls(dom, cod, tuple((a, frozenset([fn[a]])) for a in dom))

    def __call__(self, a: str) -> frozenset:
        return self.rows[a]

    @property
    def rows(self) -> dict[str, frozenset]:
        return dict(self.table)

    def pairs(self) -> frozenset:
        return frozenset((a, b) for a, img in self.table for b in img)

    def is_single_valued(self) -> bool:
        return all(len(img) == 1 for _, img in self.table)

    def as_function(self) -> dict[str, str]:
        if not self.is_single_valued():
            raise PreconditionError("multimap is not single valued")
        return {a: next(iter(img)) for a, img in self.table}

    def validate(self) -> None:
        for a, img in self.table:
            if not img:
                raise ValidationError(f"row {a!r} is empty (every element needs an image)")
        hit = set().union(*(img for _, img in self.table)) if self.table else set()
        missing = [b for b in self.cod if b not in hit]
        if missing:
            raise ValidationError(f"not surjective: {missing} have no preimage")

    def to_json(self) -> dict:
        return {"dom": self.dom.to_json(), "cod": self.cod.to_json(),
                "table": {a: sorted(img) for a, img in self.table}}

    @classmethod
    def from_json(cls, obj: dict) -> "MultiMap":
        try:
            dom, cod = FinSet(tuple(obj["dom"])), FinSet(tuple(obj["cod"]))
            table = obj["table"]
        except KeyError as exc:
            raise ValidationError(f"missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise ValidationError(str(exc)) from None
        if not isinstance(table, dict):
            raise ValidationError("field 'table' must be an object")
        return cls(dom, cod, tuple((a, frozenset(img)) for a, img in table.items()))

    def __repr__(self):
        body = ", ".join(f"{a}->{{{','.join(sorted(img))}}}" for a, img in self.table)
        return f"MultiMap({body})"


def ms_identity(X: FinSet) -> MultiMap:
    return MultiMap(X, X, tuple((a, frozenset([a])) for a in X))


def ms_compose(s: MultiMap, r: MultiMap) -> MultiMap:
    """Relational composite: ``(sr)(a)`` is the union of ``s(b)`` over ``b`` in ``r(a)``."""
    if r.cod != s.dom:
        raise CompositionError(f"codomain {r.cod!r} does not match domain {s.dom!r}")
    srows = s.rows
    return MultiMap(r.dom, s.cod,
                    tuple((a, frozenset().union(*(srows[b] for b in img))) for a, img in r.table))


def ms_dagger(r: MultiMap) -> MultiMap:
    conv: dict[str, set] = {b: set() for b in r.cod}
    for a, img in r.table:
        for b in img:
            conv[b].add(a)
    return MultiMap(r.cod, r.dom, tuple((b, frozenset(conv[b])) for b in r.cod))


def ms_graph_dilator(r: MultiMap) -> Span:
    """The graph ``{(a, b) : b in r(a)}`` with its two projections."""
    pts = sorted(r.pairs())
    apex = FinSet(tuple(pair_label(a, b) for a, b in pts))
    p1 = MultiMap.from_function(apex, r.dom, {pair_label(a, b): a for a, b in pts})
    p2 = MultiMap.from_function(apex, r.cod, {pair_label(a, b): b for a, b in pts})
    return Span(p1, p2)


def _pairing(span: Span) -> dict[str, tuple[str, str]]:
    f, g = span.left.as_function(), span.right.as_function()
    return {x: (f[x], g[x]) for x in span.apex}


def span_image(span: Span) -> frozenset:
    """Pairs ``(f x, g x)`` hit by a span of functions."""
    return frozenset(_pairing(span).values())


def ms_mediate(dilator: Span, dilation: Span) -> MultiMap:
    """Mediating function from a span of functions into a jointly monic span of functions."""
    inv: dict[tuple[str, str], str] = {}
    for y, pr in _pairing(dilator).items():
        if pr in inv:
            raise MediationError("target span is not jointly monic", triangle="pairing injective")
        inv[pr] = y
    e = {}
    for x, pr in _pairing(dilation).items():
        if pr not in inv:
            side = "left" if pr[0] not in {p[0] for p in inv} else "right"
            raise MediationError(f"no apex element over {pr}", triangle=f"{side} triangle")
        e[x] = inv[pr]
    return MultiMap.from_function(dilation.apex, dilator.apex, e)


def surj_is_independent(sq: Square) -> bool:
    """Independent iff the square commutes and the comparison map onto the set pullback is onto."""
    f, g = sq.f.as_function(), sq.g.as_function()
    u, v = sq.u.as_function(), sq.v.as_function()
    if any(u[f[x]] != v[g[x]] for x in sq.f.dom):
        return False
    hit = {(f[x], g[x]) for x in sq.f.dom}
    return all((a, b) in hit for a in sq.u.dom for b in sq.v.dom if u[a] == v[b])


def surj_independent_pullback(cs: Cospan) -> Span:
    u, v = cs.left.as_function(), cs.right.as_function()
    pts = [(a, b) for a in cs.left.dom for b in cs.right.dom if u[a] == v[b]]
    apex = FinSet(tuple(pair_label(a, b) for a, b in pts))
    p1 = MultiMap.from_function(apex, cs.left.dom, {pair_label(a, b): a for a, b in pts})
    p2 = MultiMap.from_function(apex, cs.right.dom, {pair_label(a, b): b for a, b in pts})
    return Span(p1, p2)


def surj_factorize(sp: Span) -> tuple[MultiMap, Span]:
    """Corestrict the pairing ``x -> (f x, g x)`` to its image."""
    pr = _pairing(sp)
    img = sorted(set(pr.values()))
    apex = FinSet(tuple(pair_label(a, b) for a, b in img))
    e = MultiMap.from_function(sp.apex, apex, {x: pair_label(*p) for x, p in pr.items()})
    m1 = MultiMap.from_function(apex, sp.left.cod, {pair_label(a, b): a for a, b in img})
    m2 = MultiMap.from_function(apex, sp.right.cod, {pair_label(a, b): b for a, b in img})
    return e, Span(m1, m2)


def surj_is_jointly_monic(sp: Span) -> bool:
    if not (sp.left.is_single_valued() and sp.right.is_single_valued()):
        return False
    pr = _pairing(sp)
    return len(set(pr.values())) == len(pr)


def commuting_equiv_check(f: MultiMap, g: MultiMap) -> bool:
    """Whether the kernel equivalences ``f^dagger f`` and ``g^dagger g`` commute.

    Also decided a second way, by asking whether the pushout square on
    ``(f, g)`` is independent; the two answers must agree.
    """
    if f.dom != g.dom:
        raise PreconditionError("functions must share a domain")
    ef = ms_compose(ms_dagger(f), f)
    eg = ms_compose(ms_dagger(g), g)
    by_relations = ms_compose(ef, eg) == ms_compose(eg, ef)
    u, v = set_pushout(Span(f, g))
    by_square = surj_is_independent(Square(f, g, u, v))
    if by_relations != by_square:
        raise AssertionError("kernel-commutation and square criteria disagree")
    return by_relations


def set_pushout(sp: Span) -> tuple[MultiMap, MultiMap]:
    """Pushout of a span of functions in Set, with classes labelled by their members."""
    from .finset import UnionFind

    f, g = sp.left.as_function(), sp.right.as_function()
    A, B = sp.left.cod, sp.right.cod
    uf = UnionFind([("L", a) for a in A] + [("R", b) for b in B])
    for x in sp.apex:
        uf.union(("L", f[x]), ("R", g[x]))
    label = {}
    for members in uf.classes().values():
        name = "[" + ",".join(f"{s}:{m}" for s, m in sorted(members)) + "]"
        for m in members:
            label[m] = name
    P = FinSet(tuple(sorted(set(label.values()))))
    u = MultiMap.from_function(A, P, {a: label[("L", a)] for a in A})
    v = MultiMap.from_function(B, P, {b: label[("R", b)] for b in B})
    return u, v


# ---------------------------------------------------------------------------
# Enumeration and sampling
# ---------------------------------------------------------------------------


def _nonempty_subsets(xs) -> list[frozenset]:
    xs = list(xs)
    return [frozenset(c) for k in range(1, len(xs) + 1) for c in combinations(xs, k)]


def all_multimaps(X: FinSet, Y: FinSet) -> Iterator[MultiMap]:
    if not len(X):
        if not len(Y):
            yield ms_identity(X)
        return
    subs = _nonempty_subsets(Y)
    for rows in product(subs, repeat=len(X)):
        if set().union(*rows) == set(Y):
            yield MultiMap(X, Y, tuple(zip(X, rows)))


def all_surjections(X: FinSet, Y: FinSet) -> Iterator[MultiMap]:
    for vals in product(list(Y), repeat=len(X)):
        if set(vals) == set(Y):
            yield MultiMap.from_function(X, Y, dict(zip(X, vals)))


def quotient_maps(X: FinSet) -> Iterator[MultiMap]:
    """One surjection out of X per partition, onto block labels."""
    for part in set_partitions(list(X)):
        label = {x: "{" + ",".join(sorted(block)) + "}" for block in part for x in block}
        yield MultiMap.from_function(X, FinSet(tuple(sorted(set(label.values())))), label)


def random_multimap(rng: random.Random, X: FinSet, Y: FinSet, density: float = 0.4,
                    repair_surjectivity: bool = True) -> MultiMap:
    if not len(X) or not len(Y):
        if len(X) or len(Y):
            raise PreconditionError("a multivalued surjection involving the empty set must be empty")
        return ms_identity(X)
    ys = list(Y)
    rows = {}
    for a in X:
        img = {b for b in ys if rng.random() < density}
        if not img:
            img = {rng.choice(ys)}
        rows[a] = img
    if repair_surjectivity:
        xs = list(X)
        for b in ys:
            if not any(b in img for img in rows.values()):
                rows[rng.choice(xs)].add(b)
    return MultiMap.from_dict(X, Y, rows)


def random_surjection(rng: random.Random, X: FinSet, Y: FinSet) -> MultiMap:
    if len(X) < len(Y) or (len(Y) == 0 and len(X) > 0):
        raise PreconditionError(f"no surjection from {len(X)} onto {len(Y)} elements")
    xs, ys = list(X), list(Y)
    rng.shuffle(xs)
    fn = {x: ys[i] for i, x in enumerate(xs[:len(ys)])}
    for x in xs[len(ys):]:
        fn[x] = rng.choice(ys)
    return MultiMap.from_function(X, Y, fn)


class MSurj(DaggerCategory):
    """Finite sets and surjective multivalued functions; dagger is the converse."""

    name = "MSurj"
    exact = True

    def __init__(self, max_size: int = 4, repair_surjectivity: bool = True,
                 empty_rate: float = 0.03):
        self.max_size = max_size
        self.repair_surjectivity = repair_surjectivity
        self.empty_rate = empty_rate

    def identity(self, X):
        return ms_identity(X)

    def compose(self, g, f):
        return ms_compose(g, f)

    def dagger(self, f):
        return ms_dagger(f)

    def mor_eq(self, f, g) -> bool:
        return f == g

    def validate(self, f) -> None:
        if not isinstance(f, MultiMap):
            raise ValidationError(f"expected MultiMap, got {type(f).__name__}")
        f.validate()

    def dilator(self, r) -> Span:
        return ms_graph_dilator(r)

    def mediate(self, dilator: Span, dilation: Span):
        if not all(m.is_single_valued() for m in (dilation.left, dilation.right)):
            raise MediationError("dilation legs are not single valued", triangle="coisometric legs")
        return ms_mediate(dilator, dilation)

    def is_jointly_monic(self, span: Span) -> bool:
        return surj_is_jointly_monic(span)

    def span_key(self, span: Span):
        if not surj_is_jointly_monic(span):
            return None
        return ("rel", span.left.cod, span.right.cod, span_image(span))

    def objects_up_to(self, n: int) -> list:
        return [finset_range(k) for k in range(n + 1)]

    def hom(self, X, Y):
        return all_multimaps(X, Y)

    def random_object(self, rng):
        if rng.random() < self.empty_rate:
            return finset_range(0)
        return finset_range(rng.randint(1, self.max_size))

    def random_morphism(self, rng, dom=None, cod=None):
        if dom is None and cod is None:
            dom = self.random_object(rng)
        if dom is not None and not len(dom):
            cod = dom if cod is None else cod
        elif cod is not None and not len(cod):
            dom = cod if dom is None else dom
        if dom is None:
            dom = finset_range(rng.randint(1, self.max_size))
        if cod is None:
            cod = finset_range(rng.randint(1, self.max_size))
        return random_multimap(rng, dom, cod, repair_surjectivity=self.repair_surjectivity)

    def random_coisometry(self, rng, dom=None, cod=None):
        if dom is None and cod is None:
            dom = self.random_object(rng)
        if cod is None:
            cod = finset_range(rng.randint(min(1, len(dom)), len(dom)))
        if dom is None:
            lo = len(cod)
            dom = cod if not lo else finset_range(rng.randint(lo, max(lo, self.max_size)))
        return random_surjection(rng, dom, cod)


class Surj(EpiRegularCategory):
    """Finite sets and surjections, with independence read off set pullbacks."""

    name = "Surj"
    exact = True

    def __init__(self, base: MSurj | None = None):
        self.dagger_base = base if base is not None else MSurj()

    def identity(self, X):
        return ms_identity(X)

    def compose(self, g, f):
        return ms_compose(g, f)

    def mor_eq(self, f, g) -> bool:
        return f == g

    def validate(self, f) -> None:
        f.validate()
        if not f.is_single_valued():
            raise ValidationError("morphisms of Surj are single valued")

    def is_independent(self, sq: Square) -> bool:
        return surj_is_independent(sq)

    def independent_pullback(self, cospan: Cospan) -> Span:
        return surj_independent_pullback(cospan)

    def factorize(self, span: Span):
        return surj_factorize(span)

    def is_jointly_monic(self, span: Span) -> bool:
        return surj_is_jointly_monic(span)

    def lift(self, target: Span, source: Span):
        e = ms_mediate(target, source)
        try:
            e.validate()
        except ValidationError as exc:
            raise MediationError(f"lift is not surjective: {exc}", triangle="surjectivity") from None
        return e

    def is_iso(self, f) -> bool:
        return f.is_single_valued() and len(f.dom) == len(f.cod) and not _misses(f)

    def inverse(self, f):
        if not self.is_iso(f):
            raise PreconditionError("not a bijection")
        return ms_dagger(f)

    def terminal(self):
        return FinSet(("*",))

    def to_terminal(self, X):
        if not len(X):
            raise PreconditionError("the empty set has no surjection onto a point")
        return MultiMap.from_function(X, self.terminal(), {x: "*" for x in X})

    def span_key(self, span: Span):
        return self.dagger_base.span_key(span)

    def objects_up_to(self, n: int) -> list:
        return [finset_range(k) for k in range(n + 1)]

    def hom(self, X, Y):
        return all_surjections(X, Y)

    def quotients(self, X):
        return quotient_maps(X)

    def random_object(self, rng):
        return self.dagger_base.random_object(rng)

    def random_morphism(self, rng, dom=None, cod=None):
        return self.dagger_base.random_coisometry(rng, dom=dom, cod=cod)


def _misses(f: MultiMap) -> bool:
    return set().union(*(img for _, img in f.table)) != set(f.cod) if f.table else len(f.cod) > 0
