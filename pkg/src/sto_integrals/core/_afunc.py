"""Closed form of A(mu, r1, r2, alpha1, alpha2, |sigma|)

The function being evaluated is

    A = int_1^inf int_1^inf xi1^r1 xi2^r2 Ptilde(xi<) Qtilde(xi>)
        exp(-alpha1 xi1 - alpha2 xi2) dxi1 dxi2

with Ptilde = (x^2-1)^(s/2) P_mu^s and Qtilde = (x^2-1)^(s/2) Q_mu^s. Both are
split into exact polynomial parts:

    Ptilde(x) = sum_p c_p x^(mu+s-2p)
    Qtilde(x) = 1/2 ln((x+1)/(x-1)) Ptilde(x) + sum_f d_f x^f

The logarithmic block then reduces to the moments

    M_n(c) = int_1^inf y^n 1/2 ln((y+1)/(y-1)) exp(-cy) dy

which hold ln 2c, Euler's constant and exp(2c) E1(2c). The polynomial block
reduces to incomplete gamma tails G_n(c) = int_1^inf y^n exp(-cy) dy.

These blocks cancel against each other, by many digits at high mu. Every A
is summed in floats first and again in mpmath when the cancellation is too
deep for double precision.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import mpmath

from ._precision import FLOAT, Arithmetic, Number, escalate, lost_digits
from ._utils import DomainError, binom, compensated_sum, parity_sign

__all__ = [
    "EULER_GAMMA",
    "AEvaluator",
    "a_closed",
    "a_closed_terms",
    "exp_e1",
    "exp_e1_scaled",
    "legendre_parts",
]

EULER_GAMMA = 0.57721566490153286061

_E1_SERIES_LIMIT = 1.0
_E1_MAX_ITERATIONS = 10_000
_TINY = 1e-300
_EPS = 2.0**-53

Poly = List[Fraction]


def _e1_series(x: float) -> float:
    total = 0.0
    term = 1.0
    terms = []
    for n in range(1, _E1_MAX_ITERATIONS):
        term *= -x / n
        contribution = term / n
        terms.append(contribution)
        total += contribution
        if abs(contribution) < _EPS * abs(total) * 0.5:
            break
    return -EULER_GAMMA - math.log(x) - compensated_sum(terms)


def _e1_continued_fraction(x: float) -> float:
    """exp(x) E1(x) by the modified Lentz algorithm, for x > 1"""
    b = x + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _E1_MAX_ITERATIONS):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 4 * _EPS:
            return h
    raise ArithmeticError(f"E1 continued fraction did not converge at x={x}")


def exp_e1(x: float) -> float:
    """Exponential integral E1(x) for x > 0

    >>> round(exp_e1(1.0), 8)
    0.21938393
    """
    if not x > 0:
        raise DomainError(f"E1 needs x > 0, got {x}")
    if x <= _E1_SERIES_LIMIT:
        return _e1_series(x)
    return _e1_continued_fraction(x) * math.exp(-x)


def exp_e1_scaled(x: float) -> float:
    """exp(x) E1(x), finite for every x > 0"""
    if not x > 0:
        raise DomainError(f"E1 needs x > 0, got {x}")
    if x <= _E1_SERIES_LIMIT:
        return math.exp(x) * _e1_series(x)
    return _e1_continued_fraction(x)


def _poly_derivative(poly: Poly) -> Poly:
    return [power * coeff for power, coeff in enumerate(poly)][1:] or [Fraction(0)]


def _poly_add(left: Poly, right: Poly) -> Poly:
    size = max(len(left), len(right))
    return [
        (left[i] if i < len(left) else 0) + (right[i] if i < len(right) else 0)
        for i in range(size)
    ]


def _poly_mul(left: Poly, right: Poly) -> Poly:
    product = [Fraction(0)] * (len(left) + len(right) - 1)
    for i, a in enumerate(left):
        if a:
            for j, b in enumerate(right):
                product[i + j] += a * b
    return product


def _poly_scale(poly: Poly, factor: Fraction | int) -> Poly:
    return [coeff * factor for coeff in poly]


_X = [Fraction(0), Fraction(1)]
_X2_MINUS_1 = [Fraction(-1), Fraction(0), Fraction(1)]


@lru_cache(maxsize=None)
def _legendre_polynomial(n: int) -> Tuple[Fraction, ...]:
    """Exact coefficients of P_n from Bonnet's recursion"""
    if n == 0:
        return (Fraction(1),)
    if n == 1:
        return (Fraction(0), Fraction(1))
    previous = list(_legendre_polynomial(n - 2))
    current = list(_legendre_polynomial(n - 1))
    raised = _poly_scale(_poly_mul(_X, current), Fraction(2 * n - 1, n))
    return tuple(_poly_add(raised, _poly_scale(previous, Fraction(-(n - 1), n))))


def _second_kind_remainder(mu: int) -> Poly:
    """W_(mu-1) = sum_k P_(k-1) P_(mu-k) / k, so that Q_mu = L/2 P_mu - W_(mu-1)"""
    total: Poly = [Fraction(0)]
    for k in range(1, mu + 1):
        product = _poly_mul(
            list(_legendre_polynomial(k - 1)), list(_legendre_polynomial(mu - k))
        )
        total = _poly_add(total, _poly_scale(product, Fraction(1, k)))
    return total


def _rodrigues_coefficients(mu: int, abs_sigma: int) -> List[Tuple[int, Fraction]]:
    """(power, c_p) of Ptilde, p = 0 .. floor((mu + |sigma|) / 2)"""
    degree = mu + abs_sigma
    scale = Fraction(math.factorial(degree), 2**mu * math.factorial(mu))
    coefficients = []
    for p in range(degree // 2 + 1):
        c_p = scale * parity_sign(p) * binom(mu, p)
        c_p *= binom(2 * mu - 2 * p, mu - abs_sigma)
        if c_p:
            coefficients.append((degree - 2 * p, c_p))
    return coefficients


@lru_cache(maxsize=None)
def legendre_parts(
    mu: int, abs_sigma: int
) -> Tuple[Tuple[Tuple[int, Fraction], ...], Tuple[Tuple[int, Fraction], ...]]:
    """Exact (power, coefficient) lists of Ptilde and of the polynomial part of Qtilde

    Qtilde = (x^2-1)^|sigma| d^|sigma| Q_mu. It is tracked through each
    derivative as L/2 U + V / (x^2-1)^e, using d(L/2)/dx = -1/(x^2-1).

    >>> p, q = legendre_parts(1, 0)
    >>> [(n, str(c)) for n, c in p], [(n, str(c)) for n, c in q]
    ([(1, '1')], [(0, '-1')])
    """
    u: Poly = list(_legendre_polynomial(mu))
    v: Poly = _poly_scale(_second_kind_remainder(mu), -1)
    for e in range(abs_sigma):
        x2_minus_1_power = [Fraction(1)]
        for _ in range(e):
            x2_minus_1_power = _poly_mul(x2_minus_1_power, _X2_MINUS_1)
        v = _poly_add(
            _poly_add(
                _poly_mul(_poly_derivative(v), _X2_MINUS_1),
                _poly_scale(_poly_mul(_X, v), -2 * e),
            ),
            _poly_scale(_poly_mul(u, x2_minus_1_power), -1),
        )
        u = _poly_derivative(u)
    p_part = tuple(_rodrigues_coefficients(mu, abs_sigma))
    q_part = tuple((power, coeff) for power, coeff in enumerate(v) if coeff)
    return p_part, q_part


@lru_cache(maxsize=None)
def _dense_parts(
    mu: int, abs_sigma: int
) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
    """Ptilde and the polynomial part of Qtilde as coefficients, lowest power first"""
    p_part, q_part = legendre_parts(mu, abs_sigma)
    p = [Fraction(0)] * (mu + abs_sigma + 1)
    for power, coeff in p_part:
        p[power] = coeff
    q = [Fraction(0)] * (max((power for power, _ in q_part), default=0) + 1)
    for power, coeff in q_part:
        q[power] = coeff
    return tuple(p), tuple(q)


def scaled_e1(arith: Arithmetic, x: Number) -> Number:
    """exp(x) E1(x) in the given arithmetic"""
    if arith.multiprecision:
        return mpmath.exp(x) * mpmath.e1(x)
    return exp_e1_scaled(x)


def _tails(arith: Arithmetic, c: Number, n_max: int) -> List[Number]:
    """G_n(c) = int_1^inf y^n exp(-cy) dy for n = 0 .. n_max"""
    decay = arith.exp(-c)
    tails = [decay / c]
    for n in range(1, n_max + 1):
        tails.append((decay + n * tails[-1]) / c)
    return tails


def _log_moments(arith: Arithmetic, c: Number, tails: List[Number]) -> List[Number]:
    """M_n(c) for every n that ``tails`` covers, from M_0, M_1 and a recurrence

    The recurrence comes from integrating y^(n-2)(y^2-1) L/2 exp(-cy) by parts:
    M_n = M_(n-2) + [n M_(n-1) - (n-2) M_(n-3) - G_(n-2)] / c
    """
    n_max = len(tails) - 1
    scaled = scaled_e1(arith, 2 * c)
    core = arith.log(2 * c) + arith.euler + scaled
    prefactor = arith.exp(-c) / (2 * c)
    moments = [prefactor * core, prefactor * ((1 + 1 / c) * core - 2 * scaled)]
    for n in range(2, n_max + 1):
        lower = (n - 2) * moments[n - 3] if n >= 3 else 0
        moments.append(
            moments[n - 2] + (n * moments[n - 1] - lower - tails[n - 2]) / c
        )
    return moments[: n_max + 1]


def _tail_polynomial(poly: Sequence[Number], alpha: Number) -> List[Number]:
    """R with int_y^inf poly(x) exp(-alpha x) dx = exp(-alpha y) R(y)"""
    tail: List[Number] = [0] * len(poly)
    running: Number = 0
    for m in reversed(range(len(poly))):
        running = (poly[m] + (m + 1) * running) / alpha
        tail[m] = running
    return tail


def _multiply(left: Sequence[Number], right: Sequence[Number]) -> List[Number]:
    product: List[Number] = [0] * (len(left) + len(right) - 1)
    for i, a in enumerate(left):
        if a:
            for j, b in enumerate(right):
                product[i + j] += a * b
    return product


def _shifted(poly: Sequence[Number], power: int) -> List[Number]:
    return [0] * power + list(poly)


class _Signed:
    """A polynomial, or a number, together with its absolute-value counterpart"""

    __slots__ = ("value", "magnitude")

    def __init__(self, value, magnitude):
        self.value = value
        self.magnitude = magnitude


def check_a_args(mu: int, r1: int, r2: int, alpha1, alpha2, abs_sigma: int) -> None:
    if not (alpha1 > 0 and alpha2 > 0):
        raise DomainError(f"A needs alpha1, alpha2 > 0, got {alpha1}, {alpha2}")
    if not 0 <= abs_sigma <= mu:
        raise DomainError(f"A needs 0 <= |sigma| <= mu, got {abs_sigma}, {mu}")
    if r1 < 0 or r2 < 0:
        raise DomainError(f"A needs r1, r2 >= 0, got {r1}, {r2}")


class AEvaluator:
    """A at one (alpha1, alpha2, |sigma|) for any mu, r1, r2, in one arithmetic

    Splitting the xi-plane along xi1 = xi2, each half is

        int_1^inf [L/2 Ptilde + q](y) y^r_out exp(-alpha_out y)
            int_1^y Ptilde(x) x^r_in exp(-alpha_in x) dx dy

    The inner integral is S - exp(-alpha_in y) R(y) with S a sum of tails and R
    a polynomial, so the logarithmic part reduces to the log moments. The
    polynomial part is integrated in the other order, which needs no logarithm.
    Products that only depend on one of r1, r2 are cached, so a whole mu-shell
    costs little more than its first A. Values and magnitudes are numbers of
    ``arith`` and must be used inside its context.
    """

    def __init__(
        self, alpha1: float, alpha2: float, abs_sigma: int, arith: Arithmetic = FLOAT
    ):
        if not (alpha1 > 0 and alpha2 > 0):
            raise DomainError(f"A needs alpha1, alpha2 > 0, got {alpha1}, {alpha2}")
        self.arith = arith
        self.inputs = (alpha1, alpha2)
        self.abs_sigma = abs_sigma
        self.alphas = (arith.number(alpha1), arith.number(alpha2))
        self.total = self.alphas[0] + self.alphas[1]
        # float exp(-alpha1 - alpha2) underflows past this
        self.underflows = not arith.multiprecision and alpha1 + alpha2 > 700.0
        self._n_max = -1
        self._tails: List[List[Number]] = []
        self._logs: List[List[Number]] = []
        self._parts: Dict[int, Tuple[_Signed, _Signed]] = {}
        self._inner: Dict[Tuple[int, int, int], Tuple[_Signed, _Signed]] = {}
        self._outer: Dict[Tuple[int, int, int], Tuple[_Signed, _Signed]] = {}
        self._values: Dict[Tuple[int, int, int], Tuple[Number, Number]] = {}

    def _moments(self, n_max: int) -> None:
        if n_max <= self._n_max:
            return
        n_max = max(n_max, 2 * self._n_max)
        self._tails, self._logs = [], []
        for c in (*self.alphas, self.total):
            tails = _tails(self.arith, c, n_max)
            self._tails.append(tails)
            self._logs.append(_log_moments(self.arith, c, tails))
        self._n_max = n_max

    def _legendre(self, mu: int) -> Tuple[_Signed, _Signed]:
        if mu not in self._parts:
            number = self.arith.number
            p, q = _dense_parts(mu, self.abs_sigma)
            self._parts[mu] = (
                _Signed([number(c) for c in p], [number(abs(c)) for c in p]),
                _Signed([number(c) for c in q], [number(abs(c)) for c in q]),
            )
        return self._parts[mu]

    def _inner_products(self, mu: int, side: int, r: int) -> Tuple[_Signed, _Signed]:
        """S and Ptilde * R for x^r Ptilde integrated on ``side`` from 1 to y"""
        key = (mu, side, r)
        if key not in self._inner:
            p, _ = self._legendre(mu)
            alpha = self.alphas[side]
            tails = self._tails[side]
            start = _Signed(
                self.arith.fsum(c * tails[n + r] for n, c in enumerate(p.value)),
                self.arith.fsum(c * tails[n + r] for n, c in enumerate(p.magnitude)),
            )
            product = _Signed(
                _multiply(p.value, _tail_polynomial(_shifted(p.value, r), alpha)),
                _multiply(
                    p.magnitude, _tail_polynomial(_shifted(p.magnitude, r), alpha)
                ),
            )
            self._inner[key] = (start, product)
        return self._inner[key]

    def _outer_products(self, mu: int, side: int, r: int) -> Tuple[_Signed, _Signed]:
        """sum of x^r Ptilde against M_n, and Ptilde * R_q for the q part on ``side``"""
        key = (mu, side, r)
        if key not in self._outer:
            p, q = self._legendre(mu)
            alpha = self.alphas[side]
            logs = self._logs[side]
            log_sum = _Signed(
                self.arith.fsum(c * logs[n + r] for n, c in enumerate(p.value)),
                self.arith.fsum(c * logs[n + r] for n, c in enumerate(p.magnitude)),
            )
            product = _Signed(
                _multiply(p.value, _tail_polynomial(_shifted(q.value, r), alpha)),
                _multiply(
                    p.magnitude, _tail_polynomial(_shifted(q.magnitude, r), alpha)
                ),
            )
            self._outer[key] = (log_sum, product)
        return self._outer[key]

    def _half(
        self, mu: int, inner: int, r_in: int, r_out: int
    ) -> Tuple[Number, Number]:
        """The part of the xi-plane where the ``inner`` electron is the smaller"""
        outer = 1 - inner
        start, log_product = self._inner_products(mu, inner, r_in)
        log_sum, poly_product = self._outer_products(mu, outer, r_out)
        fsum = self.arith.fsum
        logs = self._logs[2]
        tails = self._tails[2]
        value = [
            start.value * log_sum.value,
            -fsum(c * logs[n + r_out] for n, c in enumerate(log_product.value)),
            fsum(c * tails[n + r_in] for n, c in enumerate(poly_product.value)),
        ]
        magnitude = [
            start.magnitude * log_sum.magnitude,
            fsum(c * logs[n + r_out] for n, c in enumerate(log_product.magnitude)),
            fsum(c * tails[n + r_in] for n, c in enumerate(poly_product.magnitude)),
        ]
        return fsum(value), fsum(magnitude)

    def terms(self, mu: int, r1: int, r2: int) -> Tuple[Number, Number]:
        """A and the absolute sum of the terms it cancels from"""
        check_a_args(mu, r1, r2, *self.inputs, self.abs_sigma)
        key = (mu, r1, r2)
        if key not in self._values:
            if self.underflows:
                self._values[key] = (math.nan, math.nan)
                return self._values[key]
            self._moments(2 * (mu + self.abs_sigma) + r1 + r2 + 1)
            first = self._half(mu, 0, r1, r2)
            second = self._half(mu, 1, r2, r1)
            self._values[key] = (first[0] + second[0], first[1] + second[1])
        return self._values[key]


#: A float A is kept when no more digits than this cancel
FLOAT_LOSS_DIGITS = 2.0


@lru_cache(maxsize=4096)
def a_closed_terms(
    mu: int, r1: int, r2: int, alpha1: float, alpha2: float, abs_sigma: int
) -> Tuple[float, float]:
    """A and a bound on the absolute size of the terms it was summed from

    The second value bounds the rounding error of the first. When more than
    FLOAT_LOSS_DIGITS cancel in floats, A is re-evaluated in mpmath and the
    bound is then |A| itself.
    """
    check_a_args(mu, r1, r2, alpha1, alpha2, abs_sigma)

    def run(arith: Arithmetic) -> Tuple[Number, Number]:
        return AEvaluator(alpha1, alpha2, abs_sigma, arith).terms(mu, r1, r2)

    (value, magnitude), arith = escalate(
        run,
        lambda outcome: lost_digits(*outcome),
        FLOAT_LOSS_DIGITS,
        f"A({mu}, {r1}, {r2}, {alpha1}, {alpha2}, {abs_sigma})",
    )
    if arith.multiprecision:
        value = float(value)
        return value, abs(value)
    return value, magnitude


def a_closed(
    mu: int, r1: int, r2: int, alpha1: float, alpha2: float, abs_sigma: int
) -> float:
    """A(mu, r1, r2, alpha1, alpha2, |sigma|) in closed form

    The xi-power r1 rides on xi1 and r2 on xi2, so that an extra power of xi1
    is the same as -d/dalpha1.

    >>> a_closed(0, 0, 0, 30.0, 30.0, 0) < 1e-20
    True
    """
    return a_closed_terms(mu, r1, r2, alpha1, alpha2, abs_sigma)[0]
