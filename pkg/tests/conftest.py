import numpy as np
import pytest

from faregame import ModelParams, bimodal_distribution, solve_equilibrium, solve_monopoly_value
from faregame.monopoly import monopoly_intensities, solve_monopoly_distribution

# lines collected by the acceptance module, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def bench():
    return ModelParams()


@pytest.fixture(scope="session")
def bimodal():
    return bimodal_distribution(100)


@pytest.fixture(scope="session")
def monopoly(bench, bimodal):
    params = ModelParams(epsilon=0.0)
    V = solve_monopoly_value(params)
    lam = monopoly_intensities(V)
    m = solve_monopoly_distribution(params, bimodal, lam)
    return params, V, lam, m


@pytest.fixture(scope="session")
def equilibria(bimodal):
    """Benchmark equilibria from the default guess at the standard tolerance."""
    return {eps: solve_equilibrium(ModelParams(epsilon=eps), bimodal) for eps in (0.0, 0.1, 0.4)}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
