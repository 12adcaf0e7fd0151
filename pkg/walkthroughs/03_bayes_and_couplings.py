"""Finite probability: Bayesian inverses, conditional products, and couplings as relations.

Run: python walkthroughs/03_bayes_and_couplings.py
"""

from __future__ import annotations

from fractions import Fraction as F

from dagrel.core import Cospan, Square
from dagrel.finprob import (
    FinProbDet, FinProbSpace, StochMap, fp_bayes, fp_compose, fp_conditional_product,
    fp_dilator, fp_is_independent, joint_law,
)
from dagrel.relcat import RelCategory

A = FinProbSpace.from_dict({"a1": F(1, 2), "a2": F(1, 2)})
B = FinProbSpace.from_dict({"b1": F(3, 4), "b2": F(1, 4)})
r = StochMap(A, B, ((1, F(1, 2)), (0, F(1, 2))))
print("r        =", r)
print("r^dagger =", fp_bayes(r))

d = fp_dilator(r)
print("\nsupport dilator weights:", {k: str(v) for k, v in d.apex.as_dict().items()})

# Conditional product of two coarse-grainings over a common space.
det = FinProbDet()
u, v = det.to_terminal(A), det.to_terminal(B)
cp = fp_conditional_product(Cospan(u, v))
print("\nconditional product over a point = product measure:")
print({k: str(w) for k, w in joint_law(cp).items()})
print("independent:", fp_is_independent(Square(cp.left, cp.right, u, v)))

# Couplings compose like stochastic matrices.
s = StochMap(B, B, ((F(2, 3), 1), (F(1, 3), 0)))
s.validate()
rel = RelCategory(det)
glued = rel.compose(rel.relation(fp_dilator(s)), rel.relation(d))
print("\nglued coupling:", {k: str(w) for k, w in joint_law(glued.rep).items()})
print("epsilon of glued == s r:", rel.epsilon(glued) == fp_compose(s, r))
