import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from weinstein import WeinsteinParams, build_mu_grid, build_nu_grid, theta_rule

settings.register_profile(
    "numeric", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("numeric")

ALPHAS = (-0.25, 0.5, 1.0, 2.5)
DIMS = (1, 2)

_ACCEPTANCE = {}


def record_acceptance(number, passed, detail):
    _ACCEPTANCE[number] = (bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def params():
    return WeinsteinParams(0.5, 1)


@pytest.fixture(scope="session")
def params2():
    return WeinsteinParams(1.0, 2)


@pytest.fixture(scope="session")
def nu_grid(params):
    return build_nu_grid(params)


@pytest.fixture(scope="session")
def nu_grid2(params2):
    return build_nu_grid(params2, 8.0, 48, 40)


@pytest.fixture(scope="session")
def mu_grid(params):
    return build_mu_grid(params)


@pytest.fixture(scope="session")
def rule():
    return theta_rule(0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_points(rng, n, dim, scale=3.0):
    p = rng.uniform(-scale, scale, size=(n, dim))
    p[:, -1] = np.abs(p[:, -1])
    return p
