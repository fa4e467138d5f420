import sys
import random

import pytest

from realtopos.pca import Oracle


@pytest.fixture
def c0():
    return Oracle("c0")


@pytest.fixture
def c1():
    return Oracle("c1")


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
