"""Partial injections: codilators as pushouts, and the l2 matrices they induce.

Run: python walkthroughs/02_partial_injections.py
"""

from __future__ import annotations

from dagrel.finset import FinSet, finset_range
from dagrel.matcontr import l2_functor, mat_codilator
from dagrel.pinj import PartialInjection, pi_codilator, pi_compose, pi_dagger

r = PartialInjection(FinSet(["1", "2"]), FinSet(["x"]), frozenset({("1", "x")}))
c = pi_codilator(r)
print("r =", r.as_dict(), "(defined on", sorted(r.support), ")")
print("codilator apex:", list(c.apex))
print("  left :", c.left.as_dict())
print("  right:", c.right.as_dict())
print("right^dagger . left == r:", pi_compose(pi_dagger(c.right), c.left) == r)

# The same example after l2, on canonical objects [2] -> [2].
q = PartialInjection(finset_range(2), finset_range(2), frozenset({("1", "1")}))
R = l2_functor(q)
cd = mat_codilator(R)
print("\nl2(q) =\n" + R.pretty())
print("codilator rank d =", cd.d, "with E =", cd.E.round(6).tolist())
print("left leg:\n" + cd.left.pretty())
print("right leg:\n" + cd.right.pretty())
