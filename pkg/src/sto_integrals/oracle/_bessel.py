"""B from scipy's spherical Bessel function and finite differences"""

from __future__ import annotations

import math

from scipy.special import spherical_in

from ..core import DomainError, binom

__all__ = ["b_derivative_oracle"]


def _b_order_zero(mu: int, beta: float, abs_sigma: int) -> float:
    if beta == 0:
        if abs_sigma:
            raise DomainError("g = 0 value is singular at beta = 0 for |sigma| > 0")
        return 2.0 if mu == 0 else 0.0
    magnitude = abs(beta)
    value = 2 * float(spherical_in(mu, magnitude)) / magnitude**abs_sigma
    if beta < 0 and (mu - abs_sigma) % 2:
        value = -value
    return value


def _central_difference(
    mu: int, g: int, beta: float, abs_sigma: int, h: float
) -> float:
    total = math.fsum(
        (-1) ** j * binom(g, j) * _b_order_zero(mu, beta + (g / 2 - j) * h, abs_sigma)
        for j in range(g + 1)
    )
    return (-1) ** g * total / h**g


def b_derivative_oracle(
    mu: int,
    g: int,
    beta: float,
    abs_sigma: int,
    h: float = 1e-3,
    richardson: bool = False,
) -> float:
    """B from repeated central differences of the g = 0 Bessel value

    The g = 0 value comes from scipy's spherical_in, not from the series. With
    ``richardson`` the h^2 error term is eliminated using steps h and h/2.
    """
    if g == 0:
        return _b_order_zero(mu, beta, abs_sigma)
    coarse = _central_difference(mu, g, beta, abs_sigma, h)
    if not richardson:
        return coarse
    fine = _central_difference(mu, g, beta, abs_sigma, h / 2)
    return (4 * fine - coarse) / 3
