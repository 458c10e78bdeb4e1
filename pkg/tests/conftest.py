import math

import hypothesis
import numpy as np
import pytest

from rmpborrow.rmp import NormalComponent, SamplingModel
from rmpborrow.scenarios import ILLUSTRATIVE, make_design

hypothesis.settings.register_profile("ci", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("ci")

np.seterr(all="raise", under="ignore")

# Acceptance criteria record one status line each; printed after the run.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture(scope="session")
def trial():
    return ILLUSTRATIVE


@pytest.fixture(scope="session")
def informative():
    return NormalComponent(0.0, 0.01)


@pytest.fixture(scope="session")
def sampling():
    return SamplingModel(1 / 50)


@pytest.fixture(scope="session")
def uip_design():
    return make_design(0.5, 1.0)


@pytest.fixture(scope="session")
def flat_design():
    return make_design(0.0, 1e100)


def sqrt34():
    return math.sqrt(34.0)
