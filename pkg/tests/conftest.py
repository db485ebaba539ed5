import math

import numpy as np
import pytest

from dunkl_up.quadrature import default_scheme

ACCEPTANCE_LINES = []

MU_GRID = (-0.5, 0.0, 0.5, 1.5)


@pytest.fixture(scope="session")
def scheme():
    return default_scheme()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def gauss_norm_const(mu):
    # ||exp(-x^2/2)||^2_{mu,2} = Gamma(mu+1)
    return 1.0 / math.sqrt(math.gamma(mu + 1.0))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)
