"""B(mu, g, beta, |sigma|) = (-d/dbeta)^g [2 i_mu(beta) / beta^|sigma|]

i_mu is the modified spherical Bessel function of the first kind, so that
sqrt(2 pi) I_(mu+1/2)(beta) / beta^(|sigma|+1/2) = 2 i_mu(beta) / beta^|sigma|.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath

from ._precision import FLOAT, Arithmetic, Number
from ._utils import DomainError, SeriesNotConverged, binom, falling

__all__ = [
    "b_alternating",
    "b_series",
    "b_value",
    "b_zero",
]

DEFAULT_SERIES_TOL = 1e-16
MAX_SERIES_TERMS = 500
#: Consecutive small terms needed before the ascending series is accepted
SMALL_TERMS_TO_STOP = 3


@lru_cache(maxsize=None)
def _b_zero_fraction(mu: int, g: int, abs_sigma: int) -> Fraction:
    excess = g + abs_sigma - mu
    if excess < 0 or excess % 2:
        return Fraction(0)
    numerator = (-1) ** ((mu - abs_sigma) % 2) * 2 ** (mu + 2)
    numerator *= binom(1 + g + abs_sigma, excess // 2)
    denominator = (
        math.factorial(1 + abs_sigma)
        * binom(g + abs_sigma + 1, g)
        * binom(2 + g + abs_sigma + mu, 1 + (g + abs_sigma + mu) // 2)
    )
    return Fraction(numerator, denominator)


def b_zero(mu: int, g: int, abs_sigma: int) -> float:
    """Closed form at beta = 0

    Exactly 0 unless g + |sigma| - mu is even and non-negative.

    >>> b_zero(0, 0, 0), b_zero(2, 0, 0), b_zero(1, 1, 0)
    (2.0, 0.0, -0.6666666666666666)
    """
    return float(_b_zero_fraction(mu, g, abs_sigma))


@lru_cache(maxsize=None)
def _series_fraction(mu: int, g: int, abs_sigma: int, k: int) -> Fraction:
    n = mu + k
    numerator = 2 ** (mu + 1) * math.factorial(g) * binom(n + k - abs_sigma, g)
    numerator *= math.factorial(n)
    sign = -1 if g % 2 else 1
    return Fraction(sign * numerator, math.factorial(k) * math.factorial(2 * n + 1))


@lru_cache(maxsize=None)
def _series_coefficient(mu: int, g: int, abs_sigma: int, k: int) -> float:
    """Coefficient of beta^(mu - |sigma| - g + 2k), correctly rounded"""
    return float(_series_fraction(mu, g, abs_sigma, k))


def _first_series_index(mu: int, g: int, abs_sigma: int) -> int:
    # binom(mu + 2k - |sigma|, g) vanishes until 2k >= g - mu + |sigma|
    return max(0, -(-(g - mu + abs_sigma) // 2))


def b_series(
    mu: int,
    g: int,
    beta: float,
    abs_sigma: int,
    tol: float = DEFAULT_SERIES_TOL,
    arith: Arithmetic = FLOAT,
) -> Number:
    """Ascending series in beta^2, the production path for beta != 0

    Every term has a non-negative integer power of beta, and a negative beta
    flips the sign of all terms alike. In an mpmath ``arith`` the result is an
    mpf and ``tol`` should be near its epsilon.

    >>> math.isclose(b_series(0, 0, 1.0, 0), 2 * math.sinh(1.0), rel_tol=1e-14)
    True
    """
    if beta == 0:
        raise DomainError("b_series needs beta != 0, use b_zero")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    magnitude = abs(arith.number(beta))
    sign_flip = beta < 0
    k = _first_series_index(mu, g, abs_sigma)
    terms = []
    small = 0
    for _ in range(MAX_SERIES_TERMS):
        power = mu - abs_sigma - g + 2 * k
        if arith.multiprecision:
            coefficient = arith.number(_series_fraction(mu, g, abs_sigma, k))
        else:
            coefficient = _series_coefficient(mu, g, abs_sigma, k)
        term = coefficient * magnitude**power
        if sign_flip and power % 2:
            term = -term
        terms.append(term)
        if abs(term) <= tol * abs(arith.fsum(terms)):
            small += 1
            if small >= SMALL_TERMS_TO_STOP:
                return arith.fsum(terms)
        else:
            small = 0
        k += 1
    raise SeriesNotConverged(
        f"B({mu}, {g}, {beta}, {abs_sigma}): {MAX_SERIES_TERMS} terms, last term "
        f"{float(terms[-1]):.3e} against sum {float(arith.fsum(terms)):.3e}"
    )


def b_value(
    mu: int,
    g: int,
    beta: float,
    abs_sigma: int,
    tol: float = DEFAULT_SERIES_TOL,
    arith: Arithmetic = FLOAT,
) -> Number:
    """b_zero when beta compares exactly equal to 0, b_series otherwise"""
    if beta == 0:
        return arith.number(_b_zero_fraction(mu, g, abs_sigma))
    return b_series(mu, g, beta, abs_sigma, tol, arith)


def _alternating_dps(mu: int, g: int, beta: float, abs_sigma: int) -> int:
    lost_per_order = max(0.0, -math.log10(abs(beta)) + math.log10(2))
    return 40 + int((2 * mu + g + abs_sigma + 2) * lost_per_order) + 4 * (mu + g)


def b_alternating(mu: int, g: int, beta: float, abs_sigma: int) -> float:
    """Closed form in exp(beta) and exp(-beta), for cross-checks only

    The form cancels catastrophically for small |beta|. It is therefore
    evaluated in mpmath with enough working digits to absorb the loss, and
    rounded to a float at the end.
    """
    if beta == 0:
        raise DomainError("b_alternating needs beta != 0")
    with mpmath.workdps(_alternating_dps(mu, g, beta, abs_sigma)):
        b = mpmath.mpf(beta)
        up, down = mpmath.exp(b), mpmath.exp(-b)
        total = mpmath.mpf(0)
        for k in range(mu + 1):
            outer = mpmath.mpf(falling(mu, k) * binom(mu + k, k)) / (2 * b) ** k
            inner = mpmath.mpf(0)
            for j in range(g + 1):
                weight = binom(g, j) * binom(k + abs_sigma + j, j) * math.factorial(j)
                sign = -1 if (k + j + g + mu + 1) % 2 else 1
                inner += weight / b**j * (sign * up + down)
            total += outer * inner
        value = (-1) ** ((mu + 1) % 2) * total / b ** (abs_sigma + 1)
        return float(value)
