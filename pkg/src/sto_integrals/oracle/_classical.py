"""Reference values for integrals over 1s orbitals only"""

from __future__ import annotations

import math
import warnings

from scipy.integrate import IntegrationWarning, dblquad

from ..core import (
    NonpositiveDistance,
    NonpositiveExponent,
    QuadratureNotConverged,
)
from ._bessel import b_derivative_oracle
from ._quadrature import REQUEST_MARGIN, a_quadrature, logger

__all__ = ["coulomb_1s_closed", "coulomb_1s_quadrature", "exchange_1s_oracle"]

#: (g1, g2, r1, r2) and weight of the 1s exchange expansion, without radicals
EXCHANGE_1S_TERMS = (
    ((0, 0, 2, 2), 1),
    ((0, 2, 2, 0), -1),
    ((2, 0, 0, 2), -1),
    ((2, 2, 0, 0), 1),
)
#: Finite-difference step for the beta derivatives of the exchange oracle
DERIVATIVE_STEP = 1e-2
MAX_MU = 60
#: Radial cutoff of the Coulomb quadrature, in units of 1/zeta beyond R
CUTOFF = 40.0


def _check(zetas, distance: float) -> None:
    for zeta in zetas:
        if not zeta > 0:
            raise NonpositiveExponent(f"exponent must be positive, got {zeta}")
    if not distance > 0:
        raise NonpositiveDistance(f"R must be positive, got {distance}")


def coulomb_1s_closed(zeta: float, distance: float) -> float:
    """(1s_a 1s_a | 1s_b 1s_b) for one exponent on both nuclei

    >>> round(coulomb_1s_closed(1.0, 1.4), 4)
    0.5035
    """
    _check((zeta,), distance)
    x = zeta * distance
    bracket = 1 / distance + 11 * zeta / 8 + 3 * zeta * x / 4 + zeta * x * x / 6
    return 1 / distance - math.exp(-2 * x) * bracket


def _shell_potential(zeta: float, s: float) -> float:
    """Potential of a normalized 1s density at distance s from its nucleus"""
    if s == 0:
        return zeta
    return -math.expm1(-2 * zeta * s) / s - zeta * math.exp(-2 * zeta * s)


def coulomb_1s_quadrature(zeta: float, distance: float, tol: float = 1e-10) -> float:
    """The same Coulomb integral by (r, theta) quadrature of one density"""
    _check((zeta,), distance)
    density = zeta**3 / math.pi
    upper = distance + CUTOFF / zeta

    def integrand(theta: float, r: float) -> float:
        squared = r * r + distance * distance - 2 * r * distance * math.cos(theta)
        s = math.sqrt(max(squared, 0.0))
        return (
            2
            * math.pi
            * density
            * math.exp(-2 * zeta * r)
            * r
            * r
            * math.sin(theta)
            * _shell_potential(zeta, s)
        )

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, error = dblquad(
            integrand,
            0.0,
            upper,
            0.0,
            math.pi,
            epsabs=1e-13 / REQUEST_MARGIN,
            epsrel=tol / REQUEST_MARGIN,
        )
    for warning in caught:
        logger.debug("Coulomb quadrature: %s", warning.message)
    if error > max(tol * abs(value), 1e-13):
        raise QuadratureNotConverged(
            f"Coulomb 1s({zeta}, {distance}): error {error:.3e} against {value:.6e}"
        )
    return value


def exchange_1s_oracle(
    zeta1: float, zeta2: float, distance: float, tol: float = 1e-9
) -> float:
    """(1s_a 1s_b | 1s_a 1s_b) with exponent zeta1 on nucleus a and zeta2 on b

    Uses the four-term 1s expansion, finite-difference B values and quadrature
    A values. The mu-sum stops once two consecutive shells fall below tol.
    """
    _check((zeta1, zeta2), distance)
    alpha = distance * (zeta1 + zeta2) / 2
    beta = distance * (zeta1 - zeta2) / 2
    # with beta = 0 every B vanishes beyond mu = 2 for these g
    last_mu = 2 if beta == 0 else MAX_MU

    def b(mu: int, g: int) -> float:
        return b_derivative_oracle(mu, g, beta, 0, h=DERIVATIVE_STEP, richardson=True)

    shells = []
    quiet = 0
    for mu in range(last_mu + 1):
        products = []
        for (g1, g2, r1, r2), sign in EXCHANGE_1S_TERMS:
            bb = b(mu, g1) * b(mu, g2)
            if bb == 0:
                continue
            products.append(sign * bb * a_quadrature(mu, r1, r2, alpha, alpha, 0, tol))
        shell = (2 * mu + 1) * math.fsum(products)
        shells.append(shell)
        logger.debug("exchange oracle mu=%d shell=%.6e", mu, shell)
        if beta != 0 and abs(shell) <= tol * abs(math.fsum(shells)):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
    else:
        if beta != 0:
            raise QuadratureNotConverged(
                f"exchange oracle did not settle by mu={MAX_MU}, last shell {shell:.3e}"
            )
    w = distance**5 * (zeta1 * zeta2) ** 3
    return w * math.fsum(shells) / 8
