"""Relations give back the dagger category, and deliberately broken builds get caught.

Run: python walkthroughs/05_roundtrip_and_mutants.py   (takes a minute or two)
"""

from __future__ import annotations

from dagrel.mutations import MUTANTS, hunt
from dagrel.suites import INSTANCES, make_instance, roundtrip_suite

for name in INSTANCES:
    print(roundtrip_suite(make_instance(name), 50, seed=0).summary())

print()
for name, m in MUTANTS.items():
    print(f"{name}: {m.description}")
    print("  ->", hunt(name, seed=0, samples=None).summary())
