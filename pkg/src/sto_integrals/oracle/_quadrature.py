"""Direct two-dimensional quadrature of the A function's defining integral"""

from __future__ import annotations

import logging
import math
import warnings

from scipy.integrate import IntegrationWarning, dblquad

from ..core import DomainError, QuadratureNotConverged
from ._legendre import legendre_p, legendre_q

__all__ = ["a_quadrature"]

#: The integration box ends at 1 + CUTOFF_DECAYS / min(alpha)
CUTOFF_DECAYS = 50.0
ABSOLUTE_TOL = 1e-13
#: Each dblquad is asked for this much less error than the result is allowed
REQUEST_MARGIN = 10.0

logger = logging.getLogger("sto_integrals.oracle")


def _first_kind(mu: int, abs_sigma: int, x: float) -> float:
    return (x * x - 1) ** (abs_sigma / 2) * legendre_p(mu, abs_sigma, x)


def _second_kind(mu: int, abs_sigma: int, x: float) -> float:
    return (x * x - 1) ** (abs_sigma / 2) * legendre_q(mu, abs_sigma, x)


def a_quadrature(
    mu: int,
    r1: int,
    r2: int,
    alpha1: float,
    alpha2: float,
    abs_sigma: int,
    tol: float = 1e-10,
) -> float:
    """A(mu, r1, r2, alpha1, alpha2, |sigma|) by adaptive quadrature

    The square [1, U]^2 is split along xi1 = xi2 so the P and Q factors are
    smooth inside each triangle.

    >>> forward = a_quadrature(0, 0, 0, 2.0, 3.0, 0)
    >>> math.isclose(forward, a_quadrature(0, 0, 0, 3.0, 2.0, 0), rel_tol=1e-8)
    True
    """
    if not (alpha1 > 0 and alpha2 > 0):
        raise DomainError(f"alpha must be positive, got {alpha1}, {alpha2}")
    if not 0 <= abs_sigma <= mu:
        raise DomainError(f"|sigma|={abs_sigma} outside 0..{mu}")
    if r1 < 0 or r2 < 0:
        raise DomainError(f"r must be non-negative, got {r1}, {r2}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    upper = 1 + CUTOFF_DECAYS / min(alpha1, alpha2)

    def weight(first: float, second: float, a1: float, a2: float, k1: int, k2: int):
        return first**k1 * second**k2 * math.exp(-a1 * first - a2 * second)

    def below(inner: float, outer: float) -> float:
        # inner < outer, so P takes the inner variable
        return (
            _first_kind(mu, abs_sigma, inner)
            * _second_kind(mu, abs_sigma, outer)
            * weight(outer, inner, alpha1, alpha2, r1, r2)
        )

    def above(inner: float, outer: float) -> float:
        return (
            _first_kind(mu, abs_sigma, outer)
            * _second_kind(mu, abs_sigma, inner)
            * weight(outer, inner, alpha1, alpha2, r1, r2)
        )

    total = 0.0
    error = 0.0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        for integrand, low, high in (
            (below, lambda x: 1.0, lambda x: x),
            (above, lambda x: x, lambda x: upper),
        ):
            value, abserr = dblquad(
                integrand,
                1.0,
                upper,
                low,
                high,
                epsabs=ABSOLUTE_TOL / REQUEST_MARGIN,
                epsrel=tol / REQUEST_MARGIN,
            )
            total += value
            error += abserr
    for warning in caught:
        logger.debug("A(%d, %d, %d): %s", mu, r1, r2, warning.message)
    if error > max(tol * abs(total), 10 * ABSOLUTE_TOL):
        raise QuadratureNotConverged(
            f"A({mu}, {r1}, {r2}, {alpha1}, {alpha2}, {abs_sigma}): error estimate "
            f"{error:.3e} against value {total:.6e}"
        )
    return total
