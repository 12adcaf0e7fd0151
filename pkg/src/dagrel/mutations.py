"""Deliberately broken builds used to show the property suites have teeth.

Each mutant builds an :class:`~dagrel.suites.Instance` with one defect.
:func:`hunt` runs the suites in order and reports the first one that
flags a violation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .core import Report
from .matcontr import DEFAULT_TOL, unpivoted_factor
from .suites import Instance, SUITES, make_instance


@dataclass(frozen=True)
class Mutant:
    name: str
    description: str
    build: Callable[[], Instance]


def _skip_factorisation() -> Instance:
    return make_instance("msurj", factorize_composites=False)


def _identity_dagger_mat() -> Instance:
    return make_instance("mat", mat_dagger=lambda f: f)


def _drop_surjectivity_repair() -> Instance:
    return make_instance("msurj", repair_surjectivity=False)


def _wrong_cp_denominator() -> Instance:
    return make_instance("finprob", cp_normalise="total")


def _unpivoted_rank() -> Instance:
    return make_instance("mat", mat_factor=unpivoted_factor,
                         mat_factor_rank_tol=DEFAULT_TOL.rank_tol * 1e3)


MUTANTS: dict[str, Mutant] = {m.name: m for m in (
    Mutant("skip-factorisation",
           "relation composites keep the raw outer span instead of its jointly monic part",
           _skip_factorisation),
    Mutant("identity-dagger-mat", "the dagger on contractions returns its argument",
           _identity_dagger_mat),
    Mutant("drop-surjectivity-repair",
           "the multimap sampler no longer patches missed codomain points", _drop_surjectivity_repair),
    Mutant("wrong-cp-denominator",
           "conditional products divide by the total mass instead of the fibre mass",
           _wrong_cp_denominator),
    Mutant("unpivoted-rank",
           "codilator defect factor without pivoting, rank cut-off raised a thousandfold",
           _unpivoted_rank),
)}


@dataclass(frozen=True)
class Catch:
    mutant: str
    suite: Optional[str]
    reports: tuple[Report, ...]

    @property
    def caught(self) -> bool:
        return self.suite is not None

    def summary(self) -> str:
        if self.caught:
            return f"mutant {self.mutant}: caught by {self.suite}"
        return f"mutant {self.mutant}: NOT caught"


def hunt(name: str, seed: int = 0, samples: int | None = None) -> Catch:
    """Run the suites against one mutant until a suite reports a violation."""
    inst = MUTANTS[name].build()
    reports = []
    for suite_name, fn in SUITES.items():
        try:
            rep = fn(inst, seed=seed, samples=samples)
        except Exception as exc:  # a crash is also a detection
            rep = Report(f"{suite_name}[{inst.name}]", seed=seed)
            rep.record(False, "suite crashed", error=f"{type(exc).__name__}: {exc}")
        reports.append(rep)
        if not rep.ok:
            return Catch(name, rep.suite, tuple(reports))
    return Catch(name, None, tuple(reports))
