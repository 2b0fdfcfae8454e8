"""Slow, independent reference implementations used to verify the core"""

from ._bessel import b_derivative_oracle
from ._classical import coulomb_1s_closed, coulomb_1s_quadrature, exchange_1s_oracle
from ._legendre import legendre_p, legendre_q
from ._orbitals import orbital_normalization, orbital_value
from ._quadrature import a_quadrature
from ._suite import CHECKS, CheckResult, Grid, run_checks, verify

__all__ = [
    "b_derivative_oracle",
    "coulomb_1s_closed",
    "coulomb_1s_quadrature",
    "exchange_1s_oracle",
    "legendre_p",
    "legendre_q",
    "orbital_normalization",
    "orbital_value",
    "a_quadrature",
    "CHECKS",
    "CheckResult",
    "Grid",
    "run_checks",
    "verify",
]
