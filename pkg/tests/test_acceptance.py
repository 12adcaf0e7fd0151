"""Acceptance criteria, one test per criterion, each at its stated size and tolerance.

Every test prints a single ``[PASS]``/``[FAIL] criterion N: ...`` line; the
lines are also collected and repeated in the terminal summary.  Run
directly with ``python tests/test_acceptance.py`` for just those lines.
"""

from __future__ import annotations

import math
import time

import pytest

from dagrel.matcontr import DEFAULT_TOL
from dagrel.mutations import MUTANTS, hunt
from dagrel.suites import (
    INSTANCES, MAT_COMPOSITE_TOL, coupling_suite, cross_theory_suite, dagger_suite, dilator_suite,
    epi_regular_suite, eta_exhaustive, independence_suite, l2_suite, make_instance, roundtrip_suite,
)

LINES: list[str] = []
SEED = 0


def report_line(n: int, ok: bool, text: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {text}"
    LINES.append(line)
    print(line)


def per_instance(n: int, title: str, run) -> None:
    """Run ``run(inst) -> (ok, note)`` on every instance and emit one line for the criterion."""
    notes, ok = [], True
    for name in INSTANCES:
        good, note = run(make_instance(name))
        ok &= good
        notes.append(f"{name} {note}")
    report_line(n, ok, f"{title} | " + "; ".join(notes))
    assert ok, notes


def describe(rep) -> str:
    return f"{rep.failed}/{rep.checked} failed"


def test_criterion_1_dagger_laws():
    def run(inst):
        rep = dagger_suite(inst, 500, SEED)
        fast = rep.wall_time < 10.0
        return rep.ok and fast and not rep.incomplete, f"{describe(rep)} in {rep.wall_time:.2f}s"
    per_instance(1, "dagger laws, 500 samples, exact (mat residual <= 1e-8), < 10 s each", run)
    assert DEFAULT_TOL.eq_tol == 1e-8


def test_criterion_2_independence_axioms():
    def run(inst):
        rep = independence_suite(inst, 200, SEED)
        return rep.ok, describe(rep)
    per_instance(2, "independence axioms I1-I5 on 200 squares and pastings", run)


def test_criterion_3_epi_regularity():
    def run(inst):
        rep = epi_regular_suite(inst, 100, SEED, enum_size=4)
        return rep.ok, describe(rep)
    per_instance(3, "E1-E3, strong epis by enumeration at size <= 4 (rank at dims <= 5 for mat)", run)


def test_criterion_4_dilators():
    def run(inst):
        rep = dilator_suite(inst, 100, n_alt=5, seed=SEED)
        return rep.ok, describe(rep)
    per_instance(4, f"dilators of 100 morphisms, 5 alternative dilations each "
                    f"(mat composite tol {MAT_COMPOSITE_TOL:g})", run)


def test_criterion_5_roundtrip():
    t0 = time.perf_counter()

    def run(inst):
        rt = roundtrip_suite(inst, 200, SEED)
        eta = eta_exhaustive(inst, size=3, seed=SEED)
        return rt.ok and eta.ok, f"roundtrip {describe(rt)}, eta exhaustive {describe(eta)}"
    notes, ok = [], True
    for name in INSTANCES:
        good, note = run(make_instance(name))
        ok &= good
        notes.append(f"{name} {note}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60.0
    report_line(5, ok, f"epsilon functorial on 200 pairs, eta full and faithful at size <= 3, "
                       f"triangle identity, total {elapsed:.1f}s < 60 s | " + "; ".join(notes))
    assert ok, notes


def test_criterion_6_cross_theory():
    def run(inst):
        rep = cross_theory_suite(inst, n=100, n_paste=50, seed=SEED, size=3)
        return rep.ok, describe(rep)
    per_instance(6, "pushouts by cocone enumeration, kernel criterion on 100 squares, "
                    "pasting on 50, monic iff invertible at size <= 3", run)


def partial_injection_count(m: int, n: int) -> int:
    return sum(math.comb(m, k) * math.comb(n, k) * math.factorial(k) for k in range(min(m, n) + 1))


def test_criterion_7_l2_dilatory():
    rep = l2_suite(max_n=4)
    expected = sum(partial_injection_count(m, n) for m in range(5) for n in range(5))
    ok = rep.ok and rep.checked == expected and rep.wall_time < 30.0
    report_line(7, ok, f"l2 codilators unitarily equivalent for all {rep.checked} partial injections "
                       f"[m] -> [n], m, n <= 4 (expected {expected}); {describe(rep)} "
                       f"in {rep.wall_time:.2f}s < 30 s")
    assert ok


def test_criterion_8_couplings():
    rep = coupling_suite(200, SEED)
    report_line(8, rep.ok, f"couplings compose as stochastic matrices on 200 pairs, "
                           f"Bayesian involution exact; {describe(rep)}")
    assert rep.ok


def test_criterion_9_mutants():
    catches = [hunt(name, seed=SEED) for name in MUTANTS]
    ok = len(catches) == 5 and all(c.caught for c in catches)
    report_line(9, ok, "; ".join(c.summary() for c in catches))
    assert ok


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
