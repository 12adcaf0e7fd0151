"""Finite probability spaces and measure-preserving stochastic maps, in exact rationals.

``FinProbSto`` is a dagger category under Bayesian inversion.  Its
coisometries are the deterministic maps, presented as the epi-regular
category :class:`FinProbDet`, whose independent pullbacks are conditional
products.  No floating point is used anywhere in this module.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Mapping

from .core import (
    CompositionError, Cospan, DaggerCategory, EpiRegularCategory, MediationError,
    PreconditionError, Span, Square, ValidationError,
)
from .finset import FinSet, pair_label, set_partitions

ZERO, ONE = Fraction(0), Fraction(1)


def parse_rational(x) -> Fraction:
    if type(x) is Fraction:
        return x
    if isinstance(x, bool):
        raise ValidationError(f"not a rational: {x!r}")
    if isinstance(x, float):
        raise ValidationError(f"floats are not accepted for exact weights: {x!r}")
    try:
        return Fraction(x)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ValidationError(f"not a rational: {x!r}") from None


def fmt_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class FinProbSpace:
    """Finite set with strictly positive rational weights summing to one.

    ``weights[i]`` belongs to ``points.elements[i]``.  There is no empty
    space; the one-point space is terminal among deterministic maps.
    """

    points: FinSet
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(parse_rational(w) for w in self.weights)
        if len(ws) != len(self.points):
            raise ValidationError("one weight per point is required")
        for p, w in zip(self.points, ws):
            if w <= 0:
                raise ValidationError(f"weight of {p!r} is {w}, not strictly positive (full support)")
        total = sum(ws, ZERO)
        if total != 1:
            raise ValidationError(f"weights sum to {total}, not 1")
        object.__setattr__(self, "weights", ws)

    @classmethod
    def from_dict(cls, weights: Mapping[str, Fraction]) -> "FinProbSpace":
        pts = FinSet(tuple(weights))
        return cls(pts, tuple(parse_rational(weights[p]) for p in pts))

    @classmethod
    def uniform(cls, labels) -> "FinProbSpace":
        labels = list(labels)
        return cls.from_dict({p: Fraction(1, len(labels)) for p in labels})

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def index(self, p: str) -> int:
        return self.points.elements.index(p)

    def weight(self, p: str) -> Fraction:
        return self.weights[self.index(p)]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.points, self.weights))

    def to_json(self) -> dict:
        return {"points": self.points.to_json(), "weights": [fmt_rational(w) for w in self.weights]}

    @classmethod
    def from_json(cls, obj: dict) -> "FinProbSpace":
        try:
            pts, ws = list(obj["points"]), list(obj["weights"])
        except KeyError as exc:
            raise ValidationError(f"missing field {exc.args[0]!r}") from None
        except TypeError as exc:
            raise ValidationError(str(exc)) from None
        if len(pts) != len(ws):
            raise ValidationError("'points' and 'weights' differ in length")
        if len(set(pts)) != len(pts):
            raise ValidationError(f"duplicate point labels in {pts!r}")
        try:
            return cls.from_dict(dict(zip(pts, ws)))
        except TypeError as exc:
            raise ValidationError(str(exc)) from None

    def __repr__(self):
        return "{" + ", ".join(f"{p}:{w}" for p, w in zip(self.points, self.weights)) + "}"


@dataclass(frozen=True)
class StochMap:
    """A stochastic matrix ``entries[j][i] = r(b_j | a_i)`` between finite probability spaces."""

    src: FinProbSpace
    dst: FinProbSpace
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(parse_rational(x) for x in row) for row in self.entries)
        if len(rows) != len(self.dst) or any(len(row) != len(self.src) for row in rows):
            raise ValidationError(
                f"entries must be {len(self.dst)} rows by {len(self.src)} columns")
        object.__setattr__(self, "entries", rows)

    @property
    def dom(self) -> FinProbSpace:
        return self.src

    @property
    def cod(self) -> FinProbSpace:
        return self.dst

    def __call__(self, b: str, a: str) -> Fraction:
        return self.entries[self.dst.index(b)][self.src.index(a)]

    def column(self, i: int) -> tuple[Fraction, ...]:
        return tuple(row[i] for row in self.entries)

    def validate(self) -> None:
        for j, row in enumerate(self.entries):
            for i, x in enumerate(row):
                if x < 0 or x > 1:
                    raise ValidationError(
                        f"entry ({self.dst.points.elements[j]}|{self.src.points.elements[i]}) = {x} "
                        "lies outside [0, 1]")
        for i, a in enumerate(self.src.points):
            s = sum(self.column(i), ZERO)
            if s != 1:
                raise ValidationError(f"column sum for {a!r} is {s}, not 1")
        for j, b in enumerate(self.dst.points):
            m = sum((x * w for x, w in zip(self.entries[j], self.src.weights)), ZERO)
            if m != self.dst.weights[j]:
                raise ValidationError(
                    f"measure preservation fails at {b!r}: pushforward {m} vs weight {self.dst.weights[j]}")

    def is_deterministic(self) -> bool:
        det = self.__dict__.get("_det")
        if det is None:
            det = all(x.denominator == 1 and x.numerator in (0, 1) for row in self.entries for x in row)
            object.__setattr__(self, "_det", det)
        return det

    def as_function(self) -> dict[str, str]:
        if not self.is_deterministic():
            raise PreconditionError("stochastic map is not deterministic")
        out = {}
        for i, a in enumerate(self.src.points):
            col = self.column(i)
            out[a] = self.dst.points.elements[col.index(ONE)]
        return out

    def to_json(self) -> dict:
        ents = [[b, a, fmt_rational(x)]
                for j, b in enumerate(self.dst.points)
                for i, a in enumerate(self.src.points)
                if (x := self.entries[j][i]) != 0]
        return {"src": self.src.to_json(), "dst": self.dst.to_json(), "entries": ents}

    @classmethod
    def from_json(cls, obj: dict) -> "StochMap":
        try:
            src, dst = FinProbSpace.from_json(obj["src"]), FinProbSpace.from_json(obj["dst"])
            raw = obj["entries"]
        except KeyError as exc:
            raise ValidationError(f"missing field {exc.args[0]!r}") from None
        rows = [[ZERO] * len(src) for _ in range(len(dst))]
        seen = set()
        for item in raw:
            if not isinstance(item, list) or len(item) != 3:
                raise ValidationError(f"entry {item!r} is not a [b, a, value] triple")
            b, a, x = item
            if b not in dst.points or a not in src.points:
                raise ValidationError(f"entry {item!r} names an unknown point")
            if (b, a) in seen:
                raise ValidationError(f"entry ({b}|{a}) given twice")
            seen.add((b, a))
            rows[dst.index(b)][src.index(a)] = parse_rational(x)
        return cls(src, dst, tuple(tuple(r) for r in rows))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.entries)
        return f"StochMap[{body}]"


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def fp_identity(X: FinProbSpace) -> StochMap:
    n = len(X)
    return StochMap(X, X, tuple(tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)))


def fp_compose(s: StochMap, r: StochMap) -> StochMap:
    """Exact matrix product ``(sr)(c|a) = sum_b s(c|b) r(b|a)``."""
    if r.dst != s.src:
        raise CompositionError(f"space mismatch: {r.dst!r} vs {s.src!r}")
    nb = len(r.dst)
    ents = tuple(tuple(sum((s.entries[k][j] * r.entries[j][i] for j in range(nb)), ZERO)
                       for i in range(len(r.src)))
                 for k in range(len(s.dst)))
    return StochMap(r.src, s.dst, ents)


def _det_compose(g: StochMap, f: StochMap) -> StochMap:
    """Composite of deterministic maps by following the unique 1 in each column."""
    hit_f = [f.column(i).index(ONE) for i in range(len(f.src))]
    hit_g = [g.column(j).index(ONE) for j in range(len(g.src))]
    ents = tuple(tuple(ONE if hit_g[hit_f[i]] == k else ZERO for i in range(len(f.src)))
                 for k in range(len(g.dst)))
    return StochMap(f.src, g.dst, ents)


def fp_bayes(r: StochMap) -> StochMap:
    """Bayesian inverse ``r^dagger(a|b) = r(b|a) Pr_A(a) / Pr_B(b)``."""
    pa, pb = r.src.weights, r.dst.weights
    ents = tuple(tuple(r.entries[j][i] * pa[i] / pb[j] for j in range(len(r.dst)))
                 for i in range(len(r.src)))
    return StochMap(r.dst, r.src, ents)


def fp_is_deterministic(f: StochMap) -> bool:
    return f.is_deterministic()


def pushforward(fn: Mapping[str, str], src: FinProbSpace) -> FinProbSpace:
    acc: dict[str, Fraction] = {}
    for p, w in zip(src.points, src.weights):
        acc[fn[p]] = acc.get(fn[p], ZERO) + w
    return FinProbSpace.from_dict(acc)


def fp_delta(fn: Mapping[str, str], src: FinProbSpace, dst: FinProbSpace | None = None) -> StochMap:
    """Delta matrix of a function on points; ``dst`` defaults to the pushforward space."""
    if set(fn) != set(src.points):
        raise ValidationError("function must be defined on every point of the source")
    if dst is None:
        dst = pushforward(fn, src)
    elif set(fn.values()) - set(dst.points):
        raise ValidationError("function leaves the target space")
    ents = tuple(tuple(ONE if fn[a] == b else ZERO for a in src.points) for b in dst.points)
    d = StochMap(src, dst, ents)
    d.validate()
    return d


def fp_dilator(r: StochMap) -> Span:
    """Support of ``r`` weighted by ``Pr_A(a) r(b|a)``, with both deterministic projections."""
    pts, ws = [], {}
    for i, a in enumerate(r.src.points):
        for j, b in enumerate(r.dst.points):
            x = r.entries[j][i]
            if x != 0:
                pts.append((a, b))
                ws[pair_label(a, b)] = r.src.weights[i] * x
    apex = FinProbSpace.from_dict(ws)
    p1 = fp_delta({pair_label(a, b): a for a, b in pts}, apex, r.src)
    p2 = fp_delta({pair_label(a, b): b for a, b in pts}, apex, r.dst)
    return Span(p1, p2)


def fp_conditional_product(cs: Cospan, normalise: str = "fibre") -> Span:
    """Conditional product over ``C``: weight ``Pr_A(a) Pr_B(b) / Pr_C(c)`` on ``{(a, b) : u a = v b}``.

    ``normalise="total"`` divides by the overall mass instead; it exists
    only to model a known bug and yields a span that is not measure
    preserving whenever ``C`` has more than one point.
    """
    u, v = cs.left.as_function(), cs.right.as_function()
    A, B, C = cs.left.src, cs.right.src, cs.left.dst
    raw = {}
    for a, wa in zip(A.points, A.weights):
        for b, wb in zip(B.points, B.weights):
            if u[a] == v[b]:
                raw[pair_label(a, b)] = (a, b, wa * wb, C.weight(u[a]))
    if normalise == "fibre":
        weights = {k: wab / wc for k, (_, _, wab, wc) in raw.items()}
    elif normalise == "total":
        z = sum((wab for _, _, wab, _ in raw.values()), ZERO)
        weights = {k: wab / z for k, (_, _, wab, _) in raw.items()}
    else:
        raise ValueError(f"unknown normalisation {normalise!r}")
    apex = FinProbSpace.from_dict(weights)
    p1 = fp_delta({k: a for k, (a, _, _, _) in raw.items()}, apex, A)
    p2 = fp_delta({k: b for k, (_, b, _, _) in raw.items()}, apex, B)
    return Span(p1, p2)


def joint_law(span: Span) -> dict[tuple[str, str], Fraction]:
    """Law of ``(f, g)`` under the apex measure for deterministic legs."""
    f, g = span.left.as_function(), span.right.as_function()
    law: dict[tuple[str, str], Fraction] = {}
    for x, w in zip(span.apex.points, span.apex.weights):
        k = (f[x], g[x])
        law[k] = law.get(k, ZERO) + w
    return law


def fp_is_independent(sq: Square) -> bool:
    """Exact test of ``h^dagger h = f^dagger f g^dagger g`` for a deterministic square.

    The answer is cross-validated against the conditional-probability form
    ``P[f=a, g=b] = Pr_A(a) Pr_B(b) / Pr_C(ua)`` on fibres; disagreement is
    an internal error.
    """
    for m in (sq.f, sq.g, sq.u, sq.v):
        if not m.is_deterministic():
            raise PreconditionError("independence is defined on deterministic squares")
    h = fp_compose(sq.u, sq.f)
    if h != fp_compose(sq.v, sq.g):
        return False
    lhs = fp_compose(fp_bayes(h), h)
    rhs = fp_compose(fp_compose(fp_bayes(sq.f), sq.f), fp_compose(fp_bayes(sq.g), sq.g))
    by_kernels = lhs == rhs

    law = joint_law(sq.span)
    u, v = sq.u.as_function(), sq.v.as_function()
    A, B, C = sq.u.src, sq.v.src, sq.u.dst
    by_law = all(
        law.get((a, b), ZERO) == (wa * wb / C.weight(u[a]) if u[a] == v[b] else ZERO)
        for a, wa in zip(A.points, A.weights) for b, wb in zip(B.points, B.weights))
    if by_kernels != by_law:
        raise AssertionError("kernel and conditional-probability criteria disagree")
    return by_kernels


def fp_factorize(sp: Span) -> tuple[StochMap, Span]:
    """Pairing onto its image, carrying the pushforward measure."""
    f, g = sp.left.as_function(), sp.right.as_function()
    fn = {x: pair_label(f[x], g[x]) for x in sp.apex.points}
    e = fp_delta(fn, sp.apex)
    img = e.dst
    back = {pair_label(f[x], g[x]): (f[x], g[x]) for x in sp.apex.points}
    m1 = fp_delta({k: back[k][0] for k in img.points}, img, sp.left.dst)
    m2 = fp_delta({k: back[k][1] for k in img.points}, img, sp.right.dst)
    return e, Span(m1, m2)


def fp_is_jointly_monic(sp: Span) -> bool:
    if not (sp.left.is_deterministic() and sp.right.is_deterministic()):
        return False
    f, g = sp.left.as_function(), sp.right.as_function()
    return len({(f[x], g[x]) for x in sp.apex.points}) == len(sp.apex)


def fp_lift(target: Span, source: Span) -> StochMap:
    """Deterministic ``e`` with ``target.left e = source.left`` and likewise on the right."""
    t1, t2 = target.left.as_function(), target.right.as_function()
    inv = {}
    for y in target.apex.points:
        k = (t1[y], t2[y])
        if k in inv:
            raise MediationError("target span is not jointly monic", triangle="pairing injective")
        inv[k] = y
    s1, s2 = source.left.as_function(), source.right.as_function()
    fn = {}
    for x in source.apex.points:
        k = (s1[x], s2[x])
        if k not in inv:
            raise MediationError(f"no apex point over {k}", triangle="left and right triangles")
        fn[x] = inv[k]
    try:
        return fp_delta(fn, source.apex, target.apex)
    except ValidationError as exc:
        raise MediationError(f"mediator is not measure preserving: {exc}",
                             triangle="e e^dagger = 1") from None


def fp_span_key(sp: Span):
    if not fp_is_jointly_monic(sp):
        return None
    law = joint_law(sp)
    return ("finprob", sp.left.dst, sp.right.dst, tuple(sorted(law.items())))


# ---------------------------------------------------------------------------
# Enumeration and sampling
# ---------------------------------------------------------------------------


def standard_spaces(n: int) -> list[FinProbSpace]:
    """A fixed family of dyadic spaces with at most ``n`` points."""
    fam = [{"1": ONE},
           {"1": Fraction(1, 2), "2": Fraction(1, 2)},
           {"1": Fraction(1, 4), "2": Fraction(3, 4)},
           {"1": Fraction(1, 4), "2": Fraction(1, 4), "3": Fraction(1, 2)},
           {"1": Fraction(1, 2), "2": Fraction(1, 4), "3": Fraction(1, 4)},
           {"1": Fraction(1, 4), "2": Fraction(1, 4), "3": Fraction(1, 4), "4": Fraction(1, 4)},
           {"1": Fraction(1, 8), "2": Fraction(1, 8), "3": Fraction(1, 4), "4": Fraction(1, 2)}]
    return [FinProbSpace.from_dict(d) for d in fam if len(d) <= n]


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for k in range(total + 1):
        for rest in _compositions(total - k, parts - 1):
            yield (k,) + rest


def stochastic_grid(X: FinProbSpace, Y: FinProbSpace, q: int = 4) -> Iterator[StochMap]:
    """All measure-preserving maps ``X -> Y`` whose entries lie in ``(1/q) Z``."""
    cols = [tuple(Fraction(k, q) for k in c) for c in _compositions(q, len(Y))]
    for choice in product(cols, repeat=len(X)):
        ents = tuple(tuple(choice[i][j] for i in range(len(X))) for j in range(len(Y)))
        if all(sum((ents[j][i] * X.weights[i] for i in range(len(X))), ZERO) == Y.weights[j]
               for j in range(len(Y))):
            yield StochMap(X, Y, ents)


def deterministic_maps(X: FinProbSpace, Y: FinProbSpace) -> Iterator[StochMap]:
    ys = list(Y.points)
    for vals in product(ys, repeat=len(X)):
        fn = dict(zip(X.points, vals))
        acc = {y: ZERO for y in ys}
        for x, w in zip(X.points, X.weights):
            acc[fn[x]] += w
        if all(acc[y] == Y.weight(y) for y in ys):
            yield fp_delta(fn, X, Y)


def quotient_spaces(X: FinProbSpace) -> Iterator[StochMap]:
    for part in set_partitions(list(X.points)):
        label = {x: "{" + ",".join(sorted(block)) + "}" for block in part for x in block}
        yield fp_delta(label, X)


def random_space(rng: random.Random, n: int, max_weight: int = 6) -> FinProbSpace:
    raw = [rng.randint(1, max_weight) for _ in range(n)]
    tot = sum(raw)
    return FinProbSpace.from_dict({str(i + 1): Fraction(w, tot) for i, w in enumerate(raw)})


def random_coupling(rng: random.Random, X: FinProbSpace, Y: FinProbSpace,
                    steps: int = 6) -> dict[tuple[int, int], Fraction]:
    """Joint law with the given marginals: product law moved along random 2x2 cycles."""
    pi = {(i, j): X.weights[i] * Y.weights[j] for i in range(len(X)) for j in range(len(Y))}
    if len(X) < 2 or len(Y) < 2:
        return pi
    for _ in range(steps):
        i, i2 = rng.sample(range(len(X)), 2)
        j, j2 = rng.sample(range(len(Y)), 2)
        room = min(pi[i, j], pi[i2, j2])
        t = room if rng.random() < 0.35 else room * Fraction(rng.randint(0, 4), 4)
        pi[i, j] -= t
        pi[i2, j2] -= t
        pi[i, j2] += t
        pi[i2, j] += t
    return pi


def random_stochastic(rng: random.Random, X: FinProbSpace, Y: FinProbSpace | None = None,
                      max_size: int = 4, q: int = 4) -> StochMap:
    """Random map out of ``X``.

    With ``Y`` given, conditionals of a random coupling; otherwise random
    columns with denominator ``q`` and ``Y`` the pushforward (points with
    no mass are dropped).
    """
    if Y is not None:
        pi = random_coupling(rng, X, Y)
        ents = tuple(tuple(pi[i, j] / X.weights[i] for i in range(len(X))) for j in range(len(Y)))
        return StochMap(X, Y, ents)
    k = rng.randint(1, max_size)
    cols = []
    for _ in range(len(X)):
        cuts = sorted(rng.randint(0, q) for _ in range(k - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [q])]
        cols.append([Fraction(p, q) for p in parts])
    mass = [sum((cols[i][j] * X.weights[i] for i in range(len(X))), ZERO) for j in range(k)]
    keep = [j for j in range(k) if mass[j] > 0]
    Y = FinProbSpace.from_dict({str(n + 1): mass[j] for n, j in enumerate(keep)})
    ents = tuple(tuple(cols[i][j] for i in range(len(X))) for j in keep)
    return StochMap(X, Y, ents)


def random_deterministic(rng: random.Random, X: FinProbSpace, Y: FinProbSpace | None = None,
                         max_size: int = 4) -> StochMap:
    if Y is None:
        k = rng.randint(1, len(X))
        xs = list(X.points)
        rng.shuffle(xs)
        fn = {x: str(i + 1) for i, x in enumerate(xs[:k])}
        for x in xs[k:]:
            fn[x] = str(rng.randint(1, k))
        return fp_delta(fn, X)
    maps = list(deterministic_maps(X, Y))
    if not maps:
        raise PreconditionError(f"no deterministic map {X!r} -> {Y!r}")
    return rng.choice(maps)


class FinProbSto(DaggerCategory):
    """Finite probability spaces, measure-preserving stochastic maps, Bayesian inverse."""

    name = "FinProb_sto"
    exact = True

    def __init__(self, max_size: int = 4, grid_q: int = 4):
        self.max_size = max_size
        self.grid_q = grid_q

    def identity(self, X):
        return fp_identity(X)

    def compose(self, g, f):
        return fp_compose(g, f)

    def dagger(self, f):
        return fp_bayes(f)

    def mor_eq(self, f, g) -> bool:
        return f == g

    def validate(self, f) -> None:
        if not isinstance(f, StochMap):
            raise ValidationError(f"expected StochMap, got {type(f).__name__}")
        f.validate()

    def dilator(self, r) -> Span:
        return fp_dilator(r)

    def mediate(self, dilator: Span, dilation: Span):
        if not (dilation.left.is_deterministic() and dilation.right.is_deterministic()):
            raise MediationError("dilation legs are not deterministic", triangle="coisometric legs")
        return fp_lift(dilator, dilation)

    def is_jointly_monic(self, span: Span) -> bool:
        return fp_is_jointly_monic(span)

    def span_key(self, span: Span):
        return fp_span_key(span)

    def objects_up_to(self, n: int) -> list:
        return standard_spaces(n)

    def hom(self, X, Y):
        return stochastic_grid(X, Y, self.grid_q)

    def random_object(self, rng):
        return random_space(rng, rng.randint(1, self.max_size))

    def random_morphism(self, rng, dom=None, cod=None):
        if dom is None:
            dom = self.random_object(rng)
        return random_stochastic(rng, dom, cod, max_size=self.max_size)

    def random_coisometry(self, rng, dom=None, cod=None):
        if dom is None:
            if cod is not None:
                return fp_bayes(self.random_isometry(rng, dom=cod))
            dom = self.random_object(rng)
        return random_deterministic(rng, dom, cod, self.max_size)

    def random_isometry(self, rng, dom=None, cod=None):
        if cod is None:
            # refine each point of dom into a few pieces
            dom = self.random_object(rng) if dom is None else dom
            split = {}
            for p, w in zip(dom.points, dom.weights):
                k = rng.randint(1, 2)
                for t in range(k):
                    split[f"{p}.{t + 1}"] = (p, w / k)
            cod = FinProbSpace.from_dict({k: w for k, (_, w) in split.items()})
            return fp_bayes(fp_delta({k: p for k, (p, _) in split.items()}, cod, dom))
        return fp_bayes(self.random_coisometry(rng, dom=cod, cod=dom))


class FinProbDet(EpiRegularCategory):
    """Deterministic measure-preserving maps, with conditional products as independent pullbacks."""

    name = "FinProb_det"
    exact = True

    def __init__(self, base: FinProbSto | None = None, normalise: str = "fibre"):
        self.dagger_base = base if base is not None else FinProbSto()
        self.normalise = normalise

    def identity(self, X):
        return fp_identity(X)

    def compose(self, g, f):
        if f.is_deterministic() and g.is_deterministic() and f.dst == g.src:
            return _det_compose(g, f)
        return fp_compose(g, f)

    def mor_eq(self, f, g) -> bool:
        return f == g

    def validate(self, f) -> None:
        f.validate()
        if not f.is_deterministic():
            raise ValidationError("morphisms of FinProb_det are deterministic")

    def is_independent(self, sq: Square) -> bool:
        return fp_is_independent(sq)

    def independent_pullback(self, cospan: Cospan) -> Span:
        return fp_conditional_product(cospan, self.normalise)

    def factorize(self, span: Span):
        return fp_factorize(span)

    def is_jointly_monic(self, span: Span) -> bool:
        return fp_is_jointly_monic(span)

    def lift(self, target: Span, source: Span):
        return fp_lift(target, source)

    def is_iso(self, f) -> bool:
        return f.is_deterministic() and len(f.src) == len(f.dst)

    def inverse(self, f):
        if not self.is_iso(f):
            raise PreconditionError("not an isomorphism")
        return fp_bayes(f)

    def terminal(self):
        return FinProbSpace.from_dict({"*": ONE})

    def to_terminal(self, X):
        return fp_delta({x: "*" for x in X.points}, X, self.terminal())

    def span_key(self, span: Span):
        return fp_span_key(span)

    def objects_up_to(self, n: int) -> list:
        return standard_spaces(n)

    def hom(self, X, Y):
        return deterministic_maps(X, Y)

    def quotients(self, X):
        return quotient_spaces(X)

    def random_object(self, rng):
        return self.dagger_base.random_object(rng)

    def random_morphism(self, rng, dom=None, cod=None):
        return self.dagger_base.random_coisometry(rng, dom=dom, cod=cod)
