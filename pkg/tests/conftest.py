from __future__ import annotations

import random
import sys

import pytest

from dagrel.suites import INSTANCES, make_instance


@pytest.fixture(params=INSTANCES)
def inst(request):
    return make_instance(request.param)


@pytest.fixture
def rng():
    return random.Random(20240601)



def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
