"""Associated Legendre functions on the real axis x > 1

Both kinds follow the convention without a Condon-Shortley phase:

    P_mu^s(x) = (x^2-1)^(s/2) d^s P_mu / dx^s
    Q_mu^s(x) = (x^2-1)^(s/2) d^s Q_mu / dx^s
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import hyp2f1

from ..core import DomainError

__all__ = ["legendre_p", "legendre_q"]

#: Below this the hypergeometric argument 1/x^2 is too close to 1
RECURRENCE_LIMIT = 1.1


def _check(mu: int, abs_sigma: int, x: float) -> None:
    if not x > 1:
        raise DomainError(f"Legendre functions need x > 1, got {x}")
    if not 0 <= abs_sigma <= mu:
        raise DomainError(f"order {abs_sigma} outside 0..{mu}")


def _raise_degree(table: np.ndarray, x: float) -> None:
    """Bonnet: (nu+1) F_(nu+1) = (2nu+1) x F_nu - nu F_(nu-1), in column 0"""
    for nu in range(1, table.shape[0] - 1):
        upper = (2 * nu + 1) * x * table[nu, 0] - nu * table[nu - 1, 0]
        table[nu + 1, 0] = upper / (nu + 1)


def _raise_order(table: np.ndarray, x: float, first_column) -> np.ndarray:
    """Fill columns s = 1.. from column 0 with the order-raising recurrence

    sqrt(x^2-1) F_nu^(s+1) = (nu-s) x F_nu^s - (nu+s) F_(nu-1)^s
    """
    root = math.sqrt(x * x - 1)
    degrees, orders = table.shape
    for s in range(orders - 1):
        table[0, s + 1] = first_column(s + 1)
        for nu in range(1, degrees):
            table[nu, s + 1] = (
                (nu - s) * x * table[nu, s] - (nu + s) * table[nu - 1, s]
            ) / root
    return table


def legendre_p(mu: int, abs_sigma: int, x: float) -> float:
    """P_mu^|sigma|(x) from Bonnet's recurrence, then raised in order

    >>> legendre_p(0, 0, 3.0), legendre_p(1, 0, 2.0), legendre_p(2, 2, 2.0)
    (1.0, 2.0, 9.0)
    """
    _check(mu, abs_sigma, x)
    table = np.zeros((mu + 1, abs_sigma + 1))
    table[0, 0] = 1.0
    if mu >= 1:
        table[1, 0] = x
    _raise_degree(table, x)
    return float(_raise_order(table, x, lambda s: 0.0)[mu, abs_sigma])


def _q_degree_zero(s: int, x: float) -> float:
    # s-th derivative of 1/2 ln((x+1)/(x-1)) times (x^2-1)^(s/2)
    derivative = (
        0.5
        * (-1) ** (s - 1)
        * math.factorial(s - 1)
        * ((x + 1) ** -s - (x - 1) ** -s)
    )
    return (x * x - 1) ** (s / 2) * derivative


def _q_recurrence(mu: int, abs_sigma: int, x: float) -> float:
    table = np.zeros((mu + 1, abs_sigma + 1))
    table[0, 0] = math.atanh(1 / x)
    if mu >= 1:
        table[1, 0] = x * table[0, 0] - 1
    _raise_degree(table, x)
    table = _raise_order(table, x, lambda s: _q_degree_zero(s, x))
    return float(table[mu, abs_sigma])


def _q_hypergeometric(mu: int, abs_sigma: int, x: float) -> float:
    degree = mu + abs_sigma
    log_scale = (
        0.5 * math.log(math.pi)
        + math.lgamma(degree + 1)
        - (mu + 1) * math.log(2)
        - math.lgamma(mu + 1.5)
        + 0.5 * abs_sigma * math.log(x * x - 1)
        - (degree + 1) * math.log(x)
    )
    series = hyp2f1((degree + 2) / 2, (degree + 1) / 2, mu + 1.5, 1 / (x * x))
    return (-1) ** abs_sigma * math.exp(log_scale) * float(series)


def legendre_q(mu: int, abs_sigma: int, x: float) -> float:
    """Q_mu^|sigma|(x), by recurrence near x = 1 and by 2F1 elsewhere

    >>> round(legendre_q(0, 0, 2.0), 6), round(legendre_q(1, 0, 2.0), 6)
    (0.549306, 0.098612)
    """
    _check(mu, abs_sigma, x)
    if x < RECURRENCE_LIMIT:
        return _q_recurrence(mu, abs_sigma, x)
    return _q_hypergeometric(mu, abs_sigma, x)
