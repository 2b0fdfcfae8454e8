import os

import pytest

from sto_integrals.core import IntegralClass, SlaterOrbital, make_request

# Prevent pytest from catching exceptions when debugging in vscode so that break on
# exception works correctly (see: https://github.com/pytest-dev/pytest/issues/7409)
if os.getenv("PYTEST_RAISE", "0") == "1":

    @pytest.hookimpl(tryfirst=True)
    def pytest_exception_interact(call):
        raise call.excinfo.value

    @pytest.hookimpl(tryfirst=True)
    def pytest_internalerror(excinfo):
        raise excinfo.value


@pytest.fixture(autouse=True)
def clean_tolerance_environment(monkeypatch):
    monkeypatch.delenv("STO_INTEGRALS_MU_TOL", raising=False)
    monkeypatch.delenv("STO_INTEGRALS_SERIES_TOL", raising=False)
    monkeypatch.delenv("STO_INTEGRALS_PRECISION_TOL", raising=False)


@pytest.fixture
def s1() -> SlaterOrbital:
    return SlaterOrbital(1, 0, 0, 1.0)


@pytest.fixture
def h2_coulomb(s1):
    return make_request([s1] * 4, 1.4, IntegralClass.COULOMB)


@pytest.fixture
def h2_exchange(s1):
    return make_request([s1] * 4, 1.4, IntegralClass.EXCHANGE)


@pytest.fixture
def mixed_exchange():
    """p and d orbitals with sigma = 1"""
    return make_request(
        [
            SlaterOrbital(2, 1, 1, 1.1),
            SlaterOrbital(3, 2, 0, 0.9),
            SlaterOrbital(2, 1, 0, 1.3),
            SlaterOrbital(2, 1, -1, 0.8),
        ],
        2.0,
    )
