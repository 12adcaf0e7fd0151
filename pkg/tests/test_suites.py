from __future__ import annotations

import pytest

from dagrel.core import Report, ValidationError
from dagrel.mutations import MUTANTS
from dagrel.suites import SUITES, make_instance


def test_report_invariant():
    rep = Report("x", seed=1)
    rep.record(True, "law")
    assert rep.ok and not rep.witnesses
    rep.check("boom", lambda: (_ for _ in ()).throw(ValidationError("bad")), where="here")
    assert not rep.ok and rep.failed == len(rep.witnesses) == 1
    assert "ValidationError" in rep.witnesses[0]["error"]


def test_report_does_not_swallow_internal_disagreement():
    rep = Report("x")

    def disagree():
        raise AssertionError("two routes disagree")
    with pytest.raises(AssertionError):
        rep.check("dual route", disagree)


@pytest.mark.parametrize("suite", ["dagger", "independence", "dilator"])
def test_suites_are_deterministic(suite):
    inst = make_instance("msurj")
    a = SUITES[suite](inst, seed=11, samples=30).to_json()
    b = SUITES[suite](inst, seed=11, samples=30).to_json()
    assert a == b and a["failed"] == 0


def test_suites_pass_small_samples(inst):
    for name, fn in SUITES.items():
        if name in ("epi-regular", "cross-theory") and inst.name == "finprob":
            continue  # enumeration-heavy; covered by the acceptance tests
        rep = fn(inst, seed=3, samples=15)
        assert rep.ok, rep.summary()


def test_mutant_registry():
    assert set(MUTANTS) == {"skip-factorisation", "identity-dagger-mat", "drop-surjectivity-repair",
                            "wrong-cp-denominator", "unpivoted-rank"}
    for m in MUTANTS.values():
        assert m.build().name in ("msurj", "pinj", "finprob", "mat")
