"""A(mu, r1, r2, alpha1, alpha2, |sigma|) summed term by term from its expanded form

The expanded closed form writes A as a double sum over the Rodrigues terms
c_k, c_p of Ptilde with nested finite sums in 1/alpha1, 1/alpha2 and
1/(alpha1 + alpha2) around them, plus a second block driven by the exact
polynomial part of Qtilde. It is much slower than ``a_closed`` and cancels
more, so it serves as an independent check of it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from ._afunc import (
    FLOAT_LOSS_DIGITS,
    _rodrigues_coefficients,
    check_a_args,
    scaled_e1,
)
from ._precision import FLOAT, Arithmetic, Number, escalate, lost_digits
from ._utils import binom, falling, parity_sign

__all__ = ["a_towers", "a_towers_terms", "tower_q_coefficients"]


@lru_cache(maxsize=None)
def tower_q_coefficients(mu: int, abs_sigma: int) -> Dict[int, Fraction]:
    """Coefficients d_f of the polynomial part of Qtilde, keyed by the power f

    The first sum comes from the |sigma| derivatives of 1/2 ln((x+1)/(x-1)),
    the second from W_(mu-1) = sum_j (2mu-4j-1)/((2j+1)(mu-j)) P_(mu-2j-1).

    >>> {f: str(d) for f, d in tower_q_coefficients(2, 0).items()}
    {1: '-3/2'}
    """
    s = abs_sigma
    coefficients: Dict[int, Fraction] = {}

    def add(power: int, value: Fraction) -> None:
        coefficients[power] = coefficients.get(power, Fraction(0)) + value

    for kappa in range(1, s + 1):
        lead = Fraction(parity_sign(kappa) * math.factorial(s), kappa)
        lead *= binom(mu + s - kappa, mu)
        for j in range((kappa - 1) // 2 + 1):
            outer = lead * binom(kappa, kappa - 2 * j - 1)
            for n in range((mu + s - kappa) // 2 + 1):
                term = parity_sign(n) * binom(2 * mu - 2 * n, mu - s + kappa)
                add(mu + s - 2 * (n + j) - 1, outer * term * binom(mu, n))
    for j in range((mu - s - 1) // 2 + 1 if mu > s else 0):
        m = mu - 2 * j - 1
        lead = Fraction(
            (2 * mu - 4 * j - 1) * math.factorial(m + s) * 2 ** (2 * j + 1),
            (2 * j + 1) * (mu - j) * math.factorial(m),
        )
        for n in range((mu + s - 2 * j - 1) // 2 + 1):
            term = parity_sign(n) * binom(2 * (m - n), m - s) * binom(m, n)
            add(mu + s - 2 * (n + j) - 1, -lead * term)
    scale = Fraction(1, 2**mu)
    return {f: d * scale for f, d in sorted(coefficients.items()) if d}


class _Towers:
    """Term lists of one A evaluation, with reciprocal powers cached"""

    def __init__(self, alpha1: float, alpha2: float, top: int, arith: Arithmetic):
        self.arith = arith
        self.alpha1 = arith.number(alpha1)
        self.alpha2 = arith.number(alpha2)
        self.c = self.alpha1 + self.alpha2
        self.inv1 = self._powers(1 / self.alpha1, top)
        self.inv2 = self._powers(1 / self.alpha2, top)
        self.invc = self._powers(1 / self.c, top)
        self.terms: List[Number] = []

    def _powers(self, x: Number, top: int) -> List[Number]:
        powers = [self.arith.number(1)]
        for _ in range(top):
            powers.append(powers[-1] * x)
        return powers

    def log_block(self, weight: Number, k1: int, k2: int) -> None:
        """The block holding the logarithm, E1 and Euler's constant"""
        arith = self.arith
        log = arith.log(2 * self.alpha1 * self.alpha2 / self.c) + arith.euler
        e_both = scaled_e1(arith, 2 * self.c)
        e_1 = scaled_e1(arith, 2 * self.alpha1)
        e_2 = scaled_e1(arith, 2 * self.alpha2)
        for n1 in range(k1 + 1):
            for n2 in range(k2 + 1):
                base = weight * falling(k1, n1) * falling(k2, n2)
                base *= self.inv1[n1 + 1] * self.inv2[n2 + 1]
                self.terms += [
                    base * log,
                    base * parity_sign(n1 + n2 + k1 + k2 + 1) * e_both,
                    base * parity_sign(k1 + n1) * e_1,
                    base * parity_sign(k2 + n2) * e_2,
                ]

    def second_tower(self, weight: Number, k1: int, k2: int) -> None:
        """The tower led by the sum over n2 >= 1"""
        number = self.arith.number
        inv1, inv2, invc = self.inv1, self.inv2, self.invc
        for n2 in range(1, k2 + 1):
            shifts = [
                number(Fraction(2 ** (n2 - t - 1), math.factorial(n2 - t - 1)))
                for t in range(n2)
            ]
            for j2 in range(k2 - n2 + 1):
                g = weight * number(Fraction(falling(k2, n2 + j2), n2))
                sign = parity_sign(k2 + n2 + j2)
                for n1 in range(k1 + 1):
                    lead = g * falling(k1, n1)
                    self.terms.append(-lead * inv1[n1 + 1] * inv2[n2 + j2 + 1])
                    for t, shift in enumerate(shifts):
                        self.terms.append(
                            lead * sign * shift * inv1[n1 + 1] * inv2[j2 + t + 2]
                        )
                    for j1 in range(n1 + 1):
                        h = g * (math.factorial(k1) // math.factorial(n1 - j1))
                        h *= inv2[j2 + 1] * inv1[j1 + 1]
                        self.terms.append(
                            h * binom(k1 + n2 - n1 - 1, k1 - n1) * invc[k1 + n2 - n1]
                        )
                        for t, shift in enumerate(shifts):
                            self.terms.append(
                                -h
                                * sign
                                * shift
                                * binom(t + k1 - n1, t)
                                * invc[k1 + t + 1 - n1]
                            )

    def third_tower(self, weight: Number, k1: int, k2: int) -> None:
        """The tower led by the sum over n1 >= 1"""
        number = self.arith.number
        inv1, inv2, invc = self.inv1, self.inv2, self.invc
        for n2 in range(k2 + 1):
            outer = weight * falling(k2, n2) * inv2[n2 + 1]
            for n1 in range(1, k1 + 1):
                for j1 in range(k1 - n1 + 1):
                    g = outer * number(Fraction(falling(k1, n1 + j1), n1))
                    self.terms.append(g * inv1[j1 + 1] * invc[n1])
                    self.terms.append(-g * inv1[n1 + j1 + 1])
                    sign = parity_sign(k1 + j1 + n1)
                    for t in range(n1):
                        h = g * sign
                        h *= number(
                            Fraction(2 ** (n1 - 1 - t), math.factorial(n1 - t - 1))
                        )
                        self.terms.append(h * inv1[j1 + t + 2])
                        self.terms.append(
                            h * parity_sign(k2 + n2 + 1) * invc[t + 1] * inv1[j1 + 1]
                        )

    def bracket(self, weight: Number, inner: int, power: int, inv_out: List[Number]):
        """The polynomial-part bracket for Ptilde power ``inner``, q power ``power``"""
        invc = self.invc
        for n1 in range(inner + 1):
            lead = weight * falling(inner, n1)
            for n2 in range(power + 1):
                middle = lead * binom(n1 + power - n2, power - n2)
                middle *= invc[power + n1 - n2 + 1]
                for j2 in range(n2 + 1):
                    ratio = math.factorial(power) // math.factorial(n2 - j2)
                    self.terms.append(middle * ratio * inv_out[j2 + 1])


def a_towers_terms(
    mu: int,
    r1: int,
    r2: int,
    alpha1: float,
    alpha2: float,
    abs_sigma: int,
    arith: Arithmetic = FLOAT,
    *,
    swap_pairing: bool = False,
) -> Tuple[Number, Number]:
    """A from the expanded form, with the absolute sum of its terms

    The log block pairs c_p with r1 and c_k with r2, in k1 = mu + s - 2p + r1
    and k2 = mu + s - 2k + r2. ``swap_pairing`` exchanges them. The double sum
    is symmetric in (k, p), so both give the same A.
    """
    check_a_args(mu, r1, r2, alpha1, alpha2, abs_sigma)
    if not arith.multiprecision and alpha1 + alpha2 > 700.0:
        return math.nan, math.nan
    top = 2 * (mu + abs_sigma) + r1 + r2 + 3
    towers = _Towers(alpha1, alpha2, top, arith)
    number = arith.number
    rodrigues = _rodrigues_coefficients(mu, abs_sigma)
    for power_k, c_k in rodrigues:
        for power_p, c_p in rodrigues:
            weight = number(c_k * c_p / 2)
            if swap_pairing:
                k1, k2 = power_k + r1, power_p + r2
            else:
                k1, k2 = power_p + r1, power_k + r2
            towers.log_block(weight, k1, k2)
            towers.second_tower(weight, k1, k2)
            towers.third_tower(weight, k1, k2)
    q_coefficients = tower_q_coefficients(mu, abs_sigma)
    for power_k, c_k in rodrigues:
        for power_f, d_f in q_coefficients.items():
            weight = number(c_k * d_f)
            towers.bracket(weight, power_k + r1, power_f + r2, towers.inv2)
            towers.bracket(weight, power_k + r2, power_f + r1, towers.inv1)
    decay = arith.exp(-towers.c)
    value = decay * arith.fsum(towers.terms)
    magnitude = decay * arith.fsum(abs(term) for term in towers.terms)
    return value, magnitude


def a_towers(
    mu: int, r1: int, r2: int, alpha1: float, alpha2: float, abs_sigma: int
) -> float:
    """A from the expanded form, in mpmath when floats cancel too far

    >>> from sto_integrals.core import a_closed
    >>> abs(a_towers(1, 0, 1, 1.5, 0.7, 1) / a_closed(1, 0, 1, 1.5, 0.7, 1) - 1) < 1e-10
    True
    """
    check_a_args(mu, r1, r2, alpha1, alpha2, abs_sigma)

    def run(arith: Arithmetic) -> Tuple[Number, Number]:
        return a_towers_terms(mu, r1, r2, alpha1, alpha2, abs_sigma, arith)

    (value, _), _ = escalate(
        run,
        lambda outcome: lost_digits(*outcome),
        FLOAT_LOSS_DIGITS,
        f"A towers({mu}, {r1}, {r2}, {alpha1}, {alpha2}, {abs_sigma})",
    )
    return float(value)
