"""Command-line front end.

Morphisms are read from JSON files in each instance's schema and results
are written as JSON (sorted keys, so equal inputs give identical bytes).
Exit status: 0 success, 1 a mathematical check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .core import (
    DagrelError, DualCategory, MediationError, NumericalError, Op, PreconditionError, Report,
    Cospan, Span, Square, UnsupportedOperation, ValidationError, to_jsonable,
)
from .finprob import FinProbSpace, StochMap, fp_bayes, fp_conditional_product, fp_delta, fp_dilator
from .matcontr import DEFAULT_TOL, Matrix, l2_functor, mat_codilator, mat_is_contractive, op_norm
from .msurj import MultiMap, ms_compose, ms_dagger, ms_graph_dilator
from .pinj import PartialInjection, pi_codilator, pi_compose, pi_dagger
from .finset import FinSet, finset_range
from .relcat import RelCategory
from .suites import INSTANCES, SUITES, Instance, make_instance, roundtrip_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DILATOR_SIDE = {"msurj": "dilator", "finprob": "dilator", "pinj": "codilator", "mat": "codilator"}


class InputError(Exception):
    """Unreadable or schema-violating input; maps to exit status 2."""


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------


def parse_matrix_text(text: str) -> Matrix:
    """Plain-text aligned matrix: one row per line, entries separated by spaces, brackets optional."""
    rows = []
    for line in text.splitlines():
        line = line.strip().strip("[]").strip()
        if not line:
            continue
        try:
            rows.append([float(Fraction(tok)) for tok in line.replace(",", " ").split()])
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot parse matrix row {line!r}") from None
    if rows and len({len(r) for r in rows}) != 1:
        raise InputError("matrix rows have different lengths")
    return Matrix(np.array(rows, dtype=float).reshape(len(rows), len(rows[0]) if rows else 0))


LOADERS: dict[str, Callable[[dict], Any]] = {
    "msurj": MultiMap.from_json,
    "pinj": PartialInjection.from_json,
    "finprob": StochMap.from_json,
    "mat": Matrix.from_json,
}


def read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def read_json(path: str):
    text = read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_morphism(path: str, category: str):
    """Parse a morphism file; only the schema is checked here, not the invariants.

    Matrices may also be given as aligned plain text.
    """
    if category == "mat":
        text = read_text(path)
        try:
            obj = json.loads(text)
        except json.JSONDecodeError:
            return parse_matrix_text(text)
    else:
        obj = read_json(path)
    if not isinstance(obj, dict):
        raise InputError(f"{path}: expected a JSON object")
    try:
        return LOADERS[category](obj)
    except ValidationError as exc:
        raise InputError(f"{path}: {exc}") from None


def raw_dagger(inst: Instance):
    """The dagger category whose morphisms the input files describe (no Op wrapping)."""
    return inst.D.base if isinstance(inst.D, DualCategory) else inst.D


def wrapped(inst: Instance) -> bool:
    """pinj and mat realise their epi-regular side as an opposite category."""
    return isinstance(inst.D, DualCategory)


def load_checked(path: str, inst: Instance):
    m = load_morphism(path, inst.name)
    try:
        raw_dagger(inst).validate(m)
    except ValidationError as exc:
        raise InputError(f"{path}: invariant violated: {exc}") from None
    return m


def load_epi_side(path: str, inst: Instance):
    """A morphism of the epi-regular side; for pinj and mat the file holds the underlying
    injection or isometry and it is wrapped in ``Op``."""
    m = load_checked(path, inst)
    x = Op(m) if wrapped(inst) else m
    try:
        inst.C.validate(x)
    except ValidationError as exc:
        raise InputError(f"{path}: invariant violated: {exc}") from None
    return x


def unwrap(x):
    if isinstance(x, Op):
        return unwrap(x.inner)
    if isinstance(x, Span) and wrapped_legs(x):
        return Cospan(x.left.inner, x.right.inner)
    if isinstance(x, Cospan) and wrapped_legs(x):
        return Span(x.left.inner, x.right.inner)
    return x


def wrapped_legs(x) -> bool:
    return isinstance(x.left, Op) and isinstance(x.right, Op)


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------


def instance_from_args(args) -> Instance:
    tol = DEFAULT_TOL
    if args.tol is not None:
        tol = tol.with_(eq_tol=args.tol)
    if args.rank_tol is not None:
        tol = tol.with_(rank_tol=args.rank_tol)
    kw = {"tol": tol}
    if getattr(args, "dims", None) is not None:
        kw["max_dim"] = args.dims
    return make_instance(args.category, **kw)


def cmd_compose(args, inst):
    D = raw_dagger(inst)
    f, g = (load_checked(p, inst) for p in args.inputs)
    if f.cod != g.dom:
        raise InputError("the first morphism's codomain must be the second's domain")
    return {"result": D.compose(g, f)}, True


def cmd_dagger(args, inst):
    (f,) = (load_checked(p, inst) for p in args.inputs)
    return {"result": raw_dagger(inst).dagger(f)}, True


def cmd_dilator(args, inst):
    (f,) = (load_checked(p, inst) for p in args.inputs)
    if DILATOR_SIDE[inst.name] != args.verb:
        raise InputError(f"{args.verb} is not available for {inst.name}; "
                         f"use {DILATOR_SIDE[inst.name]}")
    D = raw_dagger(inst)
    if inst.name == "mat":
        return {"result": D.codilator_full(f)}, True
    return {"result": D.dilator(f) if args.verb == "dilator" else D.codilator(f)}, True


def cmd_indpull(args, inst):
    u, v = (load_epi_side(p, inst) for p in args.inputs)
    return {"result": unwrap(inst.C.independent_pullback(Cospan(u, v)))}, True


def cmd_factorize(args, inst):
    f, g = (load_epi_side(p, inst) for p in args.inputs)
    e, m = inst.C.factorize(Span(f, g))
    key = "cofactorisation" if wrapped(inst) else "factorisation"
    return {key: {"epi": unwrap(e), "jointly_monic": unwrap(m)}}, True


def cmd_independent(args, inst):
    f, g, u, v = (load_epi_side(p, inst) for p in args.inputs)
    sq = Square(f, g, u, v)
    return {"commutes": inst.C.commutes(sq), "independent": inst.C.is_independent(sq)}, True


def cmd_check_axioms(args, inst):
    names = args.suite.split(",") if args.suite else ["dagger", "independence"]
    reports = []
    for name in names:
        if name not in SUITES:
            raise InputError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
        reports.append(SUITES[name](inst, seed=args.seed, samples=args.samples))
    for r in reports:
        print(r.summary(), file=sys.stderr)
    return {"reports": [r.to_json() for r in reports]}, all(r.ok for r in reports)


def cmd_roundtrip(args, inst):
    rep = roundtrip_suite(inst, args.samples or 200, args.seed)
    print(rep.summary(), file=sys.stderr)
    rel = inst.rel()
    return {"base": inst.D.name, "rel": rel.name, "report": rep.to_json()}, rep.ok


def load_relation(path: str, inst: Instance, rel: RelCategory):
    """A relation file is either a morphism of the dagger side (its dilator is used) or a span
    ``{"left": ..., "right": ...}`` of epi-side morphisms."""
    obj = read_json(path)
    if isinstance(obj, dict) and {"left", "right"} <= set(obj):
        legs = []
        for key in ("left", "right"):
            try:
                m = LOADERS[inst.name](obj[key])
            except ValidationError as exc:
                raise InputError(f"{path}: {key}: {exc}") from None
            x = Op(m) if wrapped(inst) else m
            try:
                inst.C.validate(x)
            except ValidationError as exc:
                raise InputError(f"{path}: {key}: invariant violated: {exc}") from None
            legs.append(x)
        try:
            return rel.relation(Span(*legs))
        except ValidationError as exc:
            raise InputError(f"{path}: {exc}") from None
    m = load_checked(path, inst)
    r = Op(m) if wrapped(inst) else m
    return rel.relation(inst.D.dilator(r), check=False)


def cmd_rel_compose(args, inst):
    rel = inst.rel()
    R, S = (load_relation(p, inst, rel) for p in args.inputs)
    if R.target != S.source:
        raise InputError("relations are not composable")
    SR, trace = rel.compose_traced(S, R)
    out = {"result": {"source": SR.source, "target": SR.target, "rep": unwrap(SR.rep)},
           "epsilon": unwrap(rel.epsilon(SR))}
    if args.trace:
        out["trace"] = {"independent_pullback": unwrap(trace.pullback),
                        "outer_span": unwrap(trace.outer),
                        "factorisation_epi": unwrap(trace.epi) if trace.epi is not None else None,
                        "jointly_monic_part": unwrap(trace.result)}
    return out, True


def validate_report(path: str, inst: Instance) -> Report:
    m = load_morphism(path, inst.name)
    rep = Report(f"validate[{inst.name}]", seed=None)
    D = raw_dagger(inst)
    if inst.name == "mat":
        rep.record(mat_is_contractive(m, D.tol), "contraction", operator_norm=op_norm(m.data))
        return rep
    rep.check("type invariants", lambda: D.validate(m) is None, input=path)
    return rep


def cmd_validate(args, inst):
    reports = [validate_report(p, inst) for p in args.inputs]
    for r in reports:
        print(r.summary(), file=sys.stderr)
    return {"reports": [r.to_json() for r in reports]}, all(r.ok for r in reports)


# ---------------------------------------------------------------------------
# Demos
# ---------------------------------------------------------------------------


def _j(x) -> str:
    return json.dumps(to_jsonable(x), sort_keys=True)


def demo_graph() -> None:
    A, B = FinSet(["a1", "a2"]), FinSet(["b1", "b2", "b3"])
    r = MultiMap.from_dict(A, B, {"a1": ["b1", "b2"], "a2": ["b2", "b3"]})
    print("Multivalued surjection r : A -> B")
    for a, img in r.rows.items():
        print(f"  {a} -> {sorted(img)}")
    d = ms_graph_dilator(r)
    print(f"Graph dilator apex: {list(d.apex)}")
    print(f"  left leg  (projection to A): {d.left.as_function()}")
    print(f"  right leg (projection to B): {d.right.as_function()}")
    print(f"right . left^dagger recovers r: {ms_compose(d.right, ms_dagger(d.left)) == r}")


def demo_pinj_codilator() -> None:
    A, B = FinSet(["1", "2"]), FinSet(["x"])
    r = PartialInjection(A, B, frozenset({("1", "x")}))
    print(f"Partial injection r : {list(A)} -> {list(B)} with r(1) = x, 2 undefined")
    c = pi_codilator(r)
    print(f"Codilator apex: {list(c.apex)}")
    print(f"  i1 : A -> apex  {c.left.as_dict()}")
    print(f"  i2 : B -> apex  {c.right.as_dict()}")
    print(f"i2^dagger . i1 = {pi_compose(pi_dagger(c.right), c.left).as_dict()} (equals r)")


def demo_bayes() -> None:
    A = FinProbSpace.uniform(["a1", "a2"])
    B = FinProbSpace.from_dict({"b1": Fraction(3, 4), "b2": Fraction(1, 4)})
    h = Fraction(1, 2)
    r = StochMap(A, B, ((Fraction(1), h), (Fraction(0), h)))
    r.validate()
    print("A uniform on {a1, a2};  Pr_B = (3/4, 1/4)")
    print("r(b|a), columns a1 a2:")
    for b in B.points:
        print(f"  {b}: " + "  ".join(str(r(b, a)) for a in A.points))
    rd = fp_bayes(r)
    print("Bayesian inverse r^dagger(a|b), columns b1 b2:")
    for a in A.points:
        print(f"  {a}: " + "  ".join(str(rd(a, b)) for b in B.points))
    print(f"(r^dagger)^dagger = r: {fp_bayes(rd) == r}")
    d = fp_dilator(r)
    print("Dilator apex (support of Pr_A(a) r(b|a)):")
    for p, w in zip(d.apex.points, d.apex.weights):
        print(f"  {p}: {w}")


def _show_pullback(f: StochMap, g: StochMap) -> None:
    print(f"  Pr_A = {_j(f.src.as_dict())}")
    print(f"  Pr_B = {_j(g.src.as_dict())}")
    print(f"  Pr_C = {_j(f.dst.as_dict())}")
    print(f"  f : A -> C  {f.as_function()}")
    print(f"  g : B -> C  {g.as_function()}")
    pb = fp_conditional_product(Cospan(f, g))
    print("  apex A x_C B with weight Pr_A(a) Pr_B(b) / Pr_C(c):")
    for p, w in zip(pb.apex.points, pb.apex.weights):
        print(f"    {p}: {w}")
    print(f"  left leg  {pb.left.as_function()}")
    print(f"  right leg {pb.right.as_function()}")


def demo_conditional_product() -> None:
    A = FinProbSpace.from_dict({"a1": Fraction(1, 3), "a2": Fraction(2, 3)})
    B = FinProbSpace.from_dict({"b1": Fraction(1, 4), "b2": Fraction(3, 4)})
    one = FinProbSpace.from_dict({"*": Fraction(1)})
    print("Over a one-point space the conditional product is the product measure:")
    _show_pullback(fp_delta({a: "*" for a in A.points}, A, one),
                   fp_delta({b: "*" for b in B.points}, B, one))
    A = FinProbSpace.from_dict({"a1": Fraction(1, 2), "a2": Fraction(1, 4), "a3": Fraction(1, 4)})
    B = FinProbSpace.from_dict({"b1": Fraction(1, 4), "b2": Fraction(1, 4), "b3": Fraction(1, 2)})
    f = fp_delta({"a1": "c1", "a2": "c2", "a3": "c2"}, A)
    g = fp_delta({"b1": "c1", "b2": "c1", "b3": "c2"}, B, f.dst)
    print("Over a two-point space only pairs in the same fibre survive:")
    _show_pullback(f, g)


def demo_l2_codilator() -> None:
    r = PartialInjection(finset_range(2), finset_range(2), frozenset({("1", "1")}))
    R = l2_functor(r)
    print("r = {(1, 1)} on [2] -> [2];  l2(r) =")
    print(R.pretty())
    c = mat_codilator(R)
    print(f"defect 1 - R^T R has rank d = {c.d}; factor E =")
    print(Matrix(c.E).pretty())
    print("codilator legs [E; R] and [0; 1]:")
    print(c.left.pretty())
    print()
    print(c.right.pretty())
    print(f"residuals: {_j(c.residuals)}")
    R2 = Matrix(np.array([[0.5]]))
    c2 = mat_codilator(R2)
    print("R = [1/2]:  E =", Matrix(c2.E).pretty(), " M =", Matrix(c2.M).pretty())


DEMOS: dict[str, Callable[[], None]] = {
    "graph": demo_graph,
    "pinj-codilator": demo_pinj_codilator,
    "bayes": demo_bayes,
    "conditional-product": demo_conditional_product,
    "l2-codilator": demo_l2_codilator,
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

VERBS: dict[str, tuple[Callable, int]] = {
    "compose": (cmd_compose, 2),
    "dagger": (cmd_dagger, 1),
    "dilator": (cmd_dilator, 1),
    "codilator": (cmd_dilator, 1),
    "indpull": (cmd_indpull, 2),
    "factorize": (cmd_factorize, 2),
    "independent": (cmd_independent, 4),
    "check-axioms": (cmd_check_axioms, 0),
    "roundtrip": (cmd_roundtrip, 0),
    "rel-compose": (cmd_rel_compose, 2),
    "validate": (cmd_validate, -1),
}


def default_seed() -> int:
    raw = os.environ.get("DAGREL_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"DAGREL_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dagrel", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)
    for verb, (_, arity) in VERBS.items():
        s = sub.add_parser(verb)
        s.add_argument("--category", "-c", choices=INSTANCES, required=True)
        if arity:
            s.add_argument("inputs", nargs="+" if arity < 0 else arity, metavar="FILE")
        s.add_argument("--seed", type=int, default=None, help="default: $DAGREL_SEED or 0")
        s.add_argument("--samples", type=int, default=None)
        s.add_argument("--tol", type=float, default=None, help="equality tolerance (mat)")
        s.add_argument("--rank-tol", type=float, default=None, help="rank cut-off (mat)")
        s.add_argument("--dims", type=int, default=None, help="largest sampled dimension (mat)")
        s.add_argument("--trace", action="store_true", help="include every intermediate")
        s.add_argument("--out", "-o", default=None, help="write JSON here instead of stdout")
        s.add_argument("--pretty", action="store_true", help="aligned text for matrices")
        if verb == "check-axioms":
            s.add_argument("--suite", default=None,
                           help=f"comma-separated subset of {','.join(SUITES)}")
    d = sub.add_parser("demo")
    d.add_argument("name", choices=sorted(DEMOS))
    return p


def emit(obj, args) -> None:
    if args.pretty and isinstance(obj.get("result"), Matrix):
        text = obj["result"].pretty() + "\n"
    else:
        text = json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.verb == "demo":
        DEMOS[args.name]()
        return EXIT_OK
    try:
        if args.seed is None:
            args.seed = default_seed()
        inst = instance_from_args(args)
        fn, _ = VERBS[args.verb]
        out, ok = fn(args, inst)
    except InputError as exc:
        print(f"dagrel: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValidationError, PreconditionError, UnsupportedOperation) as exc:
        print(f"dagrel: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, MediationError, DagrelError) as exc:
        print(f"dagrel: check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    emit(out, args)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
