"""Multivalued surjections: dagger, graph dilator, and relations over surjections.

Run: python walkthroughs/01_multivalued_surjections.py
"""

from __future__ import annotations

from dagrel.core import is_coisometry, is_isometry, verify_dilator
from dagrel.finset import FinSet
from dagrel.msurj import MSurj, MultiMap, Surj
from dagrel.relcat import RelCategory

D = MSurj()
A, B = FinSet(["a1", "a2"]), FinSet(["b1", "b2", "b3"])
r = MultiMap.from_dict(A, B, {"a1": ["b1", "b2"], "a2": ["b2", "b3"]})
print("r          =", r)
print("r^dagger   =", D.dagger(r))
print("coisometry?", is_coisometry(D, r), "| isometry?", is_isometry(D, r))

dil = D.dilator(r)
print("\nGraph dilator apex:", list(dil.apex))
print("left leg  :", dil.left)
print("right leg :", dil.right)
print("verified  :", verify_dilator(D, r, dil))

# The same morphism seen as a relation over surjections, and back again.
rel = RelCategory(Surj(D))
R = rel.relation(dil)
print("\nepsilon([p1, p2]) == r:", D.mor_eq(rel.epsilon(R), r))
s = MultiMap.from_dict(B, FinSet(["c"]), {"b1": ["c"], "b2": ["c"], "b3": ["c"]})
SR, trace = rel.compose_traced(rel.relation(D.dilator(s)), R)
print("pullback apex size  :", len(trace.pullback.apex))
print("after factorisation :", len(SR.apex))
print("epsilon of composite:", rel.epsilon(SR), "| direct:", D.compose(s, r))
