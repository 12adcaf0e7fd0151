"""Property suites over the four instances.

Each instance is bundled as a dagger category ``D``, a hand-built
epi-regular category ``C`` of its coisometries, and the generic
``Coisom(D)``; most checks compare the two routes.  Every suite returns a
:class:`~dagrel.core.Report` and is deterministic given its seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Any, Callable, Iterator, Optional

import numpy as np

from .core import (
    CoisomCategory, Cospan, DaggerCategory, DagrelError, EpiRegularCategory, MediationError, Op,
    Pasting, PreconditionError, Report, Span, Square, UnsupportedOperation, check_dagger_axioms,
    check_independence_axioms, composable_pairs, dualize, is_coisometry, is_unitary, mediate,
    timed, verify_dilator,
)
from .finprob import FinProbDet, FinProbSto, fp_bayes, fp_compose, joint_law, random_stochastic
from .finset import FinSet, finset_range
from .matcontr import (
    DEFAULT_TOL, Mat1Op, MatContr, Matrix, ToleranceConfig, l2_functor, mat_codilator,
    mat_is_isometry, numerical_rank, resid, solve_cocone,
)
from .msurj import MSurj, Surj
from .pinj import PInj, InjOp, PartialInjection, all_partial_injections, pi_codilator, pi_compose
from .relcat import RelCategory, roundtrip_check

INSTANCES = ("msurj", "pinj", "finprob", "mat")
MAT_COMPOSITE_TOL = 1e-6


@dataclass(frozen=True)
class Instance:
    """One concrete theory: the dagger side, its coisometries, and build options."""

    name: str
    D: DaggerCategory
    C: EpiRegularCategory
    options: dict = field(default_factory=dict)

    @property
    def G(self) -> CoisomCategory:
        return CoisomCategory(self.D)

    @property
    def exact(self) -> bool:
        return self.D.exact

    def rel(self, C: EpiRegularCategory | None = None) -> RelCategory:
        return RelCategory(C if C is not None else self.C,
                           factorize_composites=self.options.get("factorize_composites", True))

    def relaxed(self, eq_tol: float) -> "Instance":
        """The same instance with a looser equality tolerance (numeric instances only)."""
        if self.name != "mat":
            return self
        return make_instance("mat", **{**self.options, "tol": self.options.get("tol", DEFAULT_TOL).with_(eq_tol=eq_tol)})


def make_instance(name: str, *, repair_surjectivity: bool = True, cp_normalise: str = "fibre",
                  mat_dagger: Callable | None = None, mat_factor: Callable | None = None,
                  mat_factor_rank_tol: float | None = None, factorize_composites: bool = True,
                  tol: ToleranceConfig = DEFAULT_TOL, max_size: int = 4, max_dim: int = 5) -> Instance:
    opts = dict(repair_surjectivity=repair_surjectivity, cp_normalise=cp_normalise,
                mat_dagger=mat_dagger, mat_factor=mat_factor,
                mat_factor_rank_tol=mat_factor_rank_tol,
                factorize_composites=factorize_composites, tol=tol, max_size=max_size,
                max_dim=max_dim)
    if name == "msurj":
        base = MSurj(max_size=max_size, repair_surjectivity=repair_surjectivity)
        return Instance(name, base, Surj(base), opts)
    if name == "pinj":
        base = PInj(max_size=max_size)
        C = InjOp(base)
        return Instance(name, C.dagger_base, C, opts)
    if name == "finprob":
        base = FinProbSto(max_size=max_size)
        return Instance(name, base, FinProbDet(base, normalise=cp_normalise), opts)
    if name == "mat":
        base = MatContr(tol=tol, max_dim=max_dim, factor=mat_factor, factor_rank_tol=mat_factor_rank_tol,
                        dagger_impl=mat_dagger)
        C = Mat1Op(base)
        return Instance(name, C.dagger_base, C, opts)
    raise ValueError(f"unknown instance {name!r}; expected one of {INSTANCES}")


def mor_key(m):
    """Hashable stand-in for a morphism of an exact instance."""
    if isinstance(m, Op):
        return ("op", mor_key(m.inner))
    return m


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def random_cospan(C: EpiRegularCategory, rng: random.Random, apex=None) -> Cospan:
    Z = C.random_object(rng) if apex is None else apex
    return Cospan(C.random_morphism(rng, cod=Z), C.random_morphism(rng, cod=Z))


def random_span(C: EpiRegularCategory, rng: random.Random, apex=None) -> Span:
    X = C.random_object(rng) if apex is None else apex
    return Span(C.random_morphism(rng, dom=X), C.random_morphism(rng, dom=X))


def pullback_square(C: EpiRegularCategory, cs: Cospan) -> Square:
    pb = C.independent_pullback(cs)
    return Square(pb.left, pb.right, cs.left, cs.right)


def square_supply(C: EpiRegularCategory, rng: random.Random,
                  with_pastings: bool = True) -> Iterator[Any]:
    """Endless mix of independent-pullback squares, their restrictions, squares over the
    terminal object and pastings of independent pullbacks."""
    k = 0
    while True:
        k += 1
        kind = k % 4
        try:
            if kind == 0:
                yield pullback_square(C, random_cospan(C, rng))
            elif kind == 1:
                sq = pullback_square(C, random_cospan(C, rng))
                e = C.random_morphism(rng, cod=sq.f.dom)
                yield Square(C.compose(sq.f, e), C.compose(sq.g, e), sq.u, sq.v)
            elif kind == 2:
                sp = random_span(C, rng)
                yield Square(sp.left, sp.right, C.to_terminal(sp.left.cod), C.to_terminal(sp.right.cod))
            elif with_pastings:
                yield random_pasting(C, rng)
        except (UnsupportedOperation, PreconditionError):
            # e.g. no map from the empty set to the terminal object
            continue


def random_pasting(C: EpiRegularCategory, rng: random.Random, restrict_left: bool = False) -> Pasting:
    """Right square an independent pullback of ``(v, h)``; left square an independent pullback of
    ``(u, g)``, optionally restricted along a random morphism into its apex."""
    cs = random_cospan(C, rng)
    right = pullback_square(C, cs)
    g = right.f
    u = C.random_morphism(rng, cod=g.cod)
    left = pullback_square(C, Cospan(u, g))
    if restrict_left:
        e = C.random_morphism(rng, cod=left.f.dom)
        left = Square(C.compose(left.f, e), C.compose(left.g, e), left.u, left.v)
    return Pasting(left, right)


# ---------------------------------------------------------------------------
# 1. Dagger laws
# ---------------------------------------------------------------------------


def dagger_suite(inst: Instance, n: int = 500, seed: int = 0) -> Report:
    rng = random.Random(seed)
    rep = check_dagger_axioms(inst.D, composable_pairs(inst.D, rng), n, seed=seed)
    rep.suite = f"dagger[{inst.name}]"
    return rep


# ---------------------------------------------------------------------------
# 2. Independence axioms
# ---------------------------------------------------------------------------


def independence_suite(inst: Instance, n: int = 200, seed: int = 0) -> Report:
    """Axioms on the hand-built category and on Coisom(D); the two predicates must agree."""
    rep = Report(f"independence[{inst.name}]", seed=seed)
    with timed(rep):
        rng = random.Random(seed)
        items = [x for _, x in zip(range(n), square_supply(inst.C, rng))]
        rep.merge(check_independence_axioms(inst.C, iter(items), n, seed))
        rep.merge(check_independence_axioms(inst.G, iter(items), n, seed))
        for item in items:
            sqs = [item.left, item.right, item.outer(inst.C.compose)] if isinstance(item, Pasting) else [item]
            for sq in sqs:
                rep.check("direct and generic predicates agree",
                          lambda: inst.C.is_independent(sq) == inst.G.is_independent(sq), square=sq)
    return rep


# ---------------------------------------------------------------------------
# 3. Epi-regularity
# ---------------------------------------------------------------------------


def strong_epi_by_enumeration(C: EpiRegularCategory, e, rep: Report,
                              hom_cache: dict | None = None) -> None:
    """Diagonal fillers against jointly monic spans, enumerated up to codomain isomorphism.

    For each pair of quotients ``(f, g)`` of ``Y = cod e`` the span
    ``(fe, ge)`` factors as ``m x`` with ``m`` jointly monic; exactly one
    ``d : Y -> M`` must satisfy ``m1 d = f``, ``m2 d = g`` and ``d e = x``.
    The product-shaped jointly monic span over the terminal object is
    tried as well when the square can be completed.
    """
    cache = hom_cache if hom_cache is not None else {}

    def hom(X, Z):
        if (X, Z) not in cache:
            cache[X, Z] = list(C.hom(X, Z))
        return cache[X, Z]

    Y = e.cod
    qs = list(C.quotients(Y))
    for f, g in product(qs, qs):
        fe, ge = C.compose(f, e), C.compose(g, e)
        targets = [C.factorize(Span(fe, ge))]
        try:
            prod = C.independent_pullback(Cospan(C.to_terminal(f.cod), C.to_terminal(g.cod)))
            targets.append((C.lift(prod, Span(fe, ge)), prod))
        except (UnsupportedOperation, PreconditionError, MediationError):
            pass
        for x, m in targets:
            def unique_filler(x=x, m=m):
                hits = [d for d in hom(Y, m.apex)
                        if C.mor_eq(C.compose(m.left, d), f) and C.mor_eq(C.compose(m.right, d), g)
                        and C.mor_eq(C.compose(d, e), x)]
                return len(hits) == 1
            rep.check("E3 unique diagonal filler", unique_filler, e=e, f=f, g=g)


def strong_epi_by_rank(C: Mat1Op, e, f, g, rep: Report) -> None:
    """Numeric filler: solve for ``d`` by least squares; uniqueness from full rank of the monic span."""
    fe, ge = C.compose(f, e), C.compose(g, e)
    x, m = C.factorize(Span(fe, ge))

    def filler():
        d = C.lift(m, Span(f, g))
        return C.mor_eq(C.compose(d, e), x) and C.is_jointly_monic(m)
    rep.check("E3 diagonal filler (rank)", filler, e=e, f=f, g=g)


def epi_regular_suite(inst: Instance, n: int = 100, seed: int = 0, enum_size: int = 4) -> Report:
    C = inst.C
    rep = Report(f"epi-regular[{inst.name}]", seed=seed)
    rng = random.Random(seed)
    with timed(rep):
        for _ in range(n):
            cs = random_cospan(C, rng)
            try:
                pb = C.independent_pullback(cs)
            except DagrelError as exc:
                rep.record(False, "E1 pullback exists", cospan=cs, error=str(exc))
                continue
            sq = Square(pb.left, pb.right, cs.left, cs.right)
            rep.check("E1 pullback square independent", lambda: C.is_independent(sq), cospan=cs)
            rep.check("E1 pullback jointly monic", lambda: C.is_jointly_monic(pb), cospan=cs)
            rep.check("E1 generic route agrees",
                      lambda: inst.G.is_jointly_monic(pb) and inst.G.is_independent(sq), cospan=cs)
            # (1, u) is an independent pullback of (u, 1)
            u = cs.left
            one = C.identity(u.cod)
            rep.check("(1, u) independent pullback of (u, 1)",
                      lambda: C.is_independent_pullback(Square(C.identity(u.dom), u, u, one)), u=u)

            sp = random_span(C, rng)
            try:
                e, m = C.factorize(sp)
            except DagrelError as exc:
                rep.record(False, "E2 factorisation exists", span=sp, error=str(exc))
                continue
            rep.check("E2 recomposes", lambda: C.mor_eq(C.compose(m.left, e), sp.left)
                      and C.mor_eq(C.compose(m.right, e), sp.right), span=sp)
            rep.check("E2 jointly monic part", lambda: C.is_jointly_monic(m), span=sp)
            if inst.name == "mat":
                f = C.random_morphism(rng, dom=e.cod)
                g = C.random_morphism(rng, dom=e.cod)
                strong_epi_by_rank(C, e, f, g, rep)
        if inst.name == "mat":
            for _ in range(n):
                X = rng.randint(0, 5)
                e = C.random_morphism(rng, dom=X, cod=rng.randint(0, X))
                Y = e.cod
                strong_epi_by_rank(C, e, C.random_morphism(rng, dom=Y), C.random_morphism(rng, dom=Y), rep)
        else:
            objs = C.objects_up_to(enum_size)
            cache: dict = {}
            for X, Y in product(objs, objs):
                for e in C.hom(X, Y):
                    strong_epi_by_enumeration(C, e, rep, cache)
    return rep


# ---------------------------------------------------------------------------
# 4. Dilators
# ---------------------------------------------------------------------------


def dilator_suite(inst: Instance, n: int = 100, n_alt: int = 5, seed: int = 0) -> Report:
    """Instance dilators pass verify_dilator and recover constructed mediators.

    For the numeric instance composites are compared at the composite
    tolerance, while the codilator's own defining equations are checked
    at the strict equality tolerance.
    """
    work = inst.relaxed(MAT_COMPOSITE_TOL)
    D = work.D
    rep = Report(f"dilator[{inst.name}]", seed=seed)
    rng = random.Random(seed)
    with timed(rep):
        for _ in range(n):
            r = D.random_morphism(rng)
            if inst.name == "mat":
                strict = inst.D.base
                rep.check("codilator equations (strict)",
                          lambda: strict.codilator_full(r.inner) is not None, r=r)
            try:
                d = D.dilator(r)
            except DagrelError as exc:
                rep.record(False, "dilator exists", r=r, error=str(exc))
                continue
            alts, es = [], []
            for _ in range(n_alt):
                e = D.random_coisometry(rng, cod=d.apex)
                es.append(e)
                alts.append(Span(D.compose(d.left, e), D.compose(d.right, e)))
            rep.check("verify_dilator", lambda: verify_dilator(D, r, d, alts, report=None), r=r)
            for e, alt in zip(es, alts):
                rep.check("mediation recovers e", lambda: D.mor_eq(mediate(D, d, alt), e), r=r, e=e)
            f = D.random_coisometry(rng)
            rep.check("(1, f) is a dilator", lambda: verify_dilator(D, f, Span(D.identity(f.dom), f)), f=f)
            if inst.name == "mat":
                rep.check("eigh and pivoted-Cholesky codilators agree up to a unitary",
                          lambda: factor_routes_agree(inst.D.base, r.inner), r=r)
    return rep


def factor_routes_agree(mat: MatContr, R: Matrix) -> bool:
    """Two independent factorisations of ``1 - R^T R`` give unitarily equivalent codilators."""
    a = mat_codilator(R, mat.tol, "eigh")
    b = mat_codilator(R, mat.tol, "pivoted-cholesky")
    if a.d != b.d:
        return False
    U = solve_cocone(a.cospan, b.cospan)
    eye = np.eye(U.rows)
    return (resid(U.data @ a.left.data, b.left.data) <= mat.tol.eq_tol
            and resid(U.data @ a.right.data, b.right.data) <= mat.tol.eq_tol
            and resid(U.data.T @ U.data, eye) <= mat.tol.eq_tol)


# ---------------------------------------------------------------------------
# 5. Equivalence roundtrip
# ---------------------------------------------------------------------------


def small_dagger_homs(inst: Instance, X, Y, rng: random.Random, n_random: int = 30):
    """Morphisms ``X -> Y`` of ``D`` for the exhaustive checks (a finite family for mat)."""
    if inst.name != "mat":
        return list(inst.D.hom(X, Y))
    out = []
    for r in all_partial_injections(finset_range(Y), finset_range(X)):
        out.append(Op(l2_functor(r)))
    out.extend(inst.D.random_morphism(rng, dom=X, cod=Y) for _ in range(n_random))
    return out


def small_coisometries(inst: Instance, X, Y, rng: random.Random, n_random: int = 30):
    if inst.name != "mat":
        return list(inst.C.hom(X, Y))
    if Y > X:
        return []
    out = [Op(l2_functor(r)) for r in all_partial_injections(finset_range(Y), finset_range(X))
           if r.is_total()]
    out.extend(inst.C.random_morphism(rng, dom=X, cod=Y) for _ in range(n_random))
    return out


def eta_exhaustive(inst: Instance, size: int = 3, seed: int = 0) -> Report:
    """``eta`` faithful and full onto coisometric relations, over all small hom-sets."""
    rel = inst.rel()
    C, D = inst.C, inst.D
    rep = Report(f"eta-exhaustive[{inst.name}]", seed=seed)
    rng = random.Random(seed)
    with timed(rep):
        for X in C.objects_up_to(size):
            for Y in C.objects_up_to(size):
                homs = small_coisometries(inst, X, Y, rng)
                etas = [rel.eta(f) for f in homs]
                for i, j in product(range(len(homs)), repeat=2):
                    if i < j:
                        rep.check("eta faithful",
                                  lambda: rel.mor_eq(etas[i], etas[j]) == C.mor_eq(homs[i], homs[j]),
                                  f=homs[i], g=homs[j])
                for r in small_dagger_homs(inst, X, Y, rng):
                    R = rel.relation(D.dilator(r), check=False)
                    if not is_coisometry(rel, R):
                        rep.check("non-coisometric relation has non-coisometric epsilon",
                                  lambda: not is_coisometry(D, r), r=r)
                        continue
                    if inst.exact:
                        rep.check("eta full", lambda: any(rel.mor_eq(R, t) for t in etas), r=r)
                    else:
                        rep.check("eta full", lambda: rel.mor_eq(rel.eta(rel.as_map(R)), R), r=r)
    return rep


def roundtrip_suite(inst: Instance, n: int = 200, seed: int = 0) -> Report:
    work = inst.relaxed(MAT_COMPOSITE_TOL)
    w = roundtrip_check(work.D, work.C, n, seed=seed, rel=work.rel())
    rep = w.report
    rep.suite = f"roundtrip[{inst.name}]"
    return rep


# ---------------------------------------------------------------------------
# 6. Cross-theory checks
# ---------------------------------------------------------------------------


def pushout_by_cocones(inst: Instance, sq: Square, rep: Report, rng: random.Random,
                       z_size: int = 2) -> None:
    """An independent square is a pushout in D: every cocone has exactly one mediator ``d h^dagger``."""
    D = inst.D
    h = D.compose(sq.u, sq.f)
    hd = D.dagger(h)
    if inst.name == "mat":
        for _ in range(5):
            Z = rng.randint(0, 4)
            c0 = D.random_morphism(rng, dom=sq.u.cod, cod=Z)
            a, b = D.compose(c0, sq.u), D.compose(c0, sq.v)
            c = D.compose(D.compose(a, sq.f), hd)
            rep.check("pushout mediator d h^dagger",
                      lambda: D.mor_eq(D.compose(c, sq.u), a) and D.mor_eq(D.compose(c, sq.v), b)
                      and D.mor_eq(c, c0), square=sq)
            # c is determined by (c u, c v) iff the stacked isometries have full column rank
            stacked = np.vstack([sq.u.inner.data, sq.v.inner.data])
            rep.check("pushout mediator unique",
                      lambda: numerical_rank(stacked, inst.D.base.tol.rank_tol) == stacked.shape[1],
                      square=sq)
        return
    for Z in D.objects_up_to(z_size):
        by_bg: dict = {}
        for b in D.hom(sq.v.dom, Z):
            by_bg.setdefault(mor_key(D.compose(b, sq.g)), []).append(b)
        cs_index: dict = {}
        for c in D.hom(sq.u.cod, Z):
            k = (mor_key(D.compose(c, sq.u)), mor_key(D.compose(c, sq.v)))
            cs_index[k] = cs_index.get(k, 0) + 1
        for a in D.hom(sq.u.dom, Z):
            d = D.compose(a, sq.f)
            for b in by_bg.get(mor_key(d), []):
                c = D.compose(d, hd)
                ok_eq = lambda: D.mor_eq(D.compose(c, sq.u), a) and D.mor_eq(D.compose(c, sq.v), b)
                rep.check("pushout mediator d h^dagger", ok_eq, square=sq, a=a, b=b)
                count = cs_index.get((mor_key(a), mor_key(b)), 0)
                on_grid = inst.name != "finprob"
                rep.check("pushout mediator unique",
                          lambda: count == 1 if on_grid else count <= 1, square=sq, a=a, b=b)


def small_cospans(inst: Instance, size: int) -> Iterator[Cospan]:
    C = inst.C
    for Z in C.objects_up_to(size):
        for A in C.objects_up_to(size):
            for B in C.objects_up_to(size):
                for u in C.hom(A, Z):
                    for v in C.hom(B, Z):
                        yield Cospan(u, v)


def cross_theory_suite(inst: Instance, n: int = 100, n_paste: int = 50, seed: int = 0,
                       size: int = 3, n_pushout: int = 25) -> Report:
    C, D = inst.C, inst.D
    rep = Report(f"cross-theory[{inst.name}]", seed=seed)
    rng = random.Random(seed)
    with timed(rep):
        # independent squares are pushouts in D
        if inst.name == "mat":
            squares = [pullback_square(C, random_cospan(C, rng, apex=rng.randint(0, 3)))
                       for _ in range(n_pushout)]
        else:
            pool = [cs for cs in small_cospans(inst, min(size, 2))]
            rng.shuffle(pool)
            squares = []
            for cs in pool:
                sq = pullback_square(C, cs)
                if len(list(sq.f.dom)) <= size or inst.name == "finprob":
                    squares.append(sq)
                if len(squares) >= n_pushout:
                    break
        for sq in squares:
            pushout_by_cocones(inst, sq, rep, rng)

        # h^dagger h = f^dagger f g^dagger g
        supply = square_supply(C, rng, with_pastings=False)
        for _ in range(n):
            sq = next(supply)
            h = D.compose(sq.u, sq.f)
            crit = lambda: D.mor_eq(D.compose(D.dagger(h), h),
                                    D.compose(D.compose(D.dagger(sq.f), sq.f),
                                              D.compose(D.dagger(sq.g), sq.g)))
            rep.check("kernel criterion matches independence",
                      lambda: (C.commutes(sq) and crit()) == C.is_independent(sq), square=sq)

        # pasting lemma with an independent-pullback right square
        for k in range(n_paste):
            p = random_pasting(C, rng, restrict_left=bool(k % 2))
            outer = p.outer(C.compose)
            rep.check("pasting lemma",
                      lambda: C.is_independent_pullback(p.left) == C.is_independent_pullback(outer),
                      left=p.left, right=p.right)

        # monic iff invertible
        monic_vs_iso(inst, rep, rng, size)
    return rep


def monic_vs_iso(inst: Instance, rep: Report, rng: random.Random, size: int = 3) -> None:
    C = inst.C
    if inst.name == "mat":
        for _ in range(60):
            X = rng.randint(0, 4)
            m = C.random_morphism(rng, dom=X, cod=rng.randint(0, X))
            kp = Square(C.identity(m.dom), C.identity(m.dom), m, m)
            rep.check("kernel pair (1, 1) iff invertible",
                      lambda: C.is_independent_pullback(kp) == C.is_iso(m), m=m)
        return
    objs = C.objects_up_to(size)
    for X in objs:
        for Y in objs:
            for m in C.hom(X, Y):
                kp_square = pullback_square(C, Cospan(m, m))
                tests = list(objs) + [kp_square.f.dom]

                def monic():
                    for Z in tests:
                        hz = list(C.hom(Z, X))
                        seen: dict = {}
                        for x in hz:
                            k = mor_key(C.compose(m, x))
                            if k in seen and not C.mor_eq(seen[k], x):
                                return False
                            seen[k] = x
                    return True
                kp = Square(C.identity(X), C.identity(X), m, m)
                iso = C.is_iso(m)
                rep.check("monic iff invertible", lambda: monic() == iso, m=m)
                rep.check("kernel pair (1, 1) iff invertible",
                          lambda: C.is_independent_pullback(kp) == iso, m=m)


# ---------------------------------------------------------------------------
# 7. l2 functor
# ---------------------------------------------------------------------------


def canonical_relabel(X: FinSet) -> PartialInjection:
    """Bijection from ``X`` onto ``[|X|]`` in sorted order."""
    target = finset_range(len(X))
    return PartialInjection(X, target, frozenset(zip(X, sorted(target, key=int))))


def l2_suite(max_n: int = 4, tol: ToleranceConfig = DEFAULT_TOL) -> Report:
    """Codilators commute with l2 up to a unitary, for every partial injection ``[m] -> [n]``."""
    rep = Report("l2-dilatory", seed=None)
    with timed(rep):
        for m in range(max_n + 1):
            for n in range(max_n + 1):
                for r in all_partial_injections(finset_range(m), finset_range(n)):
                    R = l2_functor(r)

                    def unitarily_equivalent(r=r, R=R):
                        cd = mat_codilator(R, tol)
                        pc = pi_codilator(r)
                        rl = canonical_relabel(pc.apex)
                        J1 = l2_functor(pi_compose(rl, pc.left))
                        J2 = l2_functor(pi_compose(rl, pc.right))
                        if J1.rows != cd.left.rows:
                            return False
                        if resid(cd.right.data.T @ cd.left.data, J2.data.T @ J1.data) > tol.eq_tol:
                            return False
                        U = solve_cocone(cd.cospan, Cospan(J1, J2))
                        return (resid(U.data @ cd.left.data, J1.data) <= tol.eq_tol
                                and resid(U.data @ cd.right.data, J2.data) <= tol.eq_tol
                                and resid(U.data.T @ U.data, np.eye(U.cols)) <= tol.eq_tol
                                and resid(U.data @ U.data.T, np.eye(U.rows)) <= tol.eq_tol)
                    rep.check("codilator of l2(r) ~ l2(codilator of r)", unitarily_equivalent, r=r)
    return rep


# ---------------------------------------------------------------------------
# 8. Couplings
# ---------------------------------------------------------------------------


def coupling_suite(n: int = 200, seed: int = 0, inst: Instance | None = None) -> Report:
    """Relational composition of couplings equals the product of stochastic matrices."""
    inst = inst if inst is not None else make_instance("finprob")
    D, rel = inst.D, inst.rel()
    rep = Report("couplings", seed=seed)
    rng = random.Random(seed)
    with timed(rep):
        for _ in range(n):
            r = D.random_morphism(rng)
            s = D.random_morphism(rng, dom=r.cod)
            R = rel.relation(D.dilator(r), check=False)
            S = rel.relation(D.dilator(s), check=False)

            def glued():
                SR = rel.compose(S, R)
                law = joint_law(SR.rep)
                A, Cs = r.src, s.dst
                sr = fp_compose(s, r)
                return all(law.get((a, c), 0) == A.weight(a) * sr(c, a) for a in A.points for c in Cs.points)
            rep.check("composite coupling is the product", glued, r=r, s=s)
            rep.check("Bayesian involution", lambda: fp_bayes(fp_bayes(r)) == r, r=r)
            rep.check("Bayesian contravariance",
                      lambda: fp_bayes(fp_compose(s, r)) == fp_compose(fp_bayes(r), fp_bayes(s)), r=r, s=s)
    return rep


# ---------------------------------------------------------------------------
# Registry used by the CLI and the acceptance tests
# ---------------------------------------------------------------------------

SUITES: dict[str, Callable[..., Report]] = {
    "dagger": lambda inst, seed=0, samples=None: dagger_suite(inst, samples or 500, seed),
    "independence": lambda inst, seed=0, samples=None: independence_suite(inst, samples or 200, seed),
    "epi-regular": lambda inst, seed=0, samples=None: epi_regular_suite(inst, samples or 100, seed),
    "dilator": lambda inst, seed=0, samples=None: dilator_suite(inst, samples or 100, seed=seed),
    "roundtrip": lambda inst, seed=0, samples=None: roundtrip_suite(inst, samples or 200, seed),
    "cross-theory": lambda inst, seed=0, samples=None: cross_theory_suite(inst, samples or 100, seed=seed),
}


def run_all(inst: Instance, seed: int = 0, samples: int | None = None,
            stop_on_failure: bool = False) -> list[Report]:
    out = []
    for name, fn in SUITES.items():
        rep = fn(inst, seed=seed, samples=samples)
        out.append(rep)
        if stop_on_failure and not rep.ok:
            break
    return out
