"""Float and mpmath arithmetic behind one small interface

Sums that cancel are evaluated in floats first. When the sum of the absolute
values of their terms shows that too many digits were lost, they are evaluated
again in mpmath with enough working digits to absorb the loss.
"""

from __future__ import annotations

import math
import sys
from contextlib import AbstractContextManager, nullcontext
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional, Tuple, TypeVar

import mpmath

from ._utils import NotConverged

__all__ = [
    "FLOAT",
    "Arithmetic",
    "escalate",
    "lost_digits",
]

#: Correct digits wanted from an mpmath evaluation after its cancellation
TARGET_DIGITS = 20
#: Headroom for rounding in recurrences and products
GUARD_DIGITS = 10
MAX_DPS = 400

#: A float or an mpmath mpf, depending on the Arithmetic in use
Number = Any
T = TypeVar("T")


class Arithmetic:
    """Number type of one evaluation: floats when ``dps`` is None, else mpmath

    Numbers are created and combined inside ``context()``, which sets the
    mpmath working precision.
    """

    def __init__(self, dps: Optional[int] = None):
        if dps is not None and not 0 < dps <= MAX_DPS:
            raise ValueError(f"dps must be in 1..{MAX_DPS}, got {dps}")
        self.dps = dps

    def __repr__(self) -> str:
        return f"Arithmetic(dps={self.dps})"

    @property
    def multiprecision(self) -> bool:
        return self.dps is not None

    @property
    def digits(self) -> int:
        return sys.float_info.dig if self.dps is None else self.dps

    @property
    def epsilon(self) -> Number:
        if self.dps is None:
            return sys.float_info.epsilon
        return mpmath.mpf(10) ** (1 - self.dps)

    @property
    def euler(self) -> Number:
        if self.dps is None:
            return 0.57721566490153286061
        return +mpmath.euler

    def context(self) -> AbstractContextManager:
        if self.dps is None:
            return nullcontext()
        return mpmath.workdps(self.dps)

    def number(self, value: float | int | Fraction) -> Number:
        if self.dps is None:
            return float(value)
        if isinstance(value, Fraction):
            return mpmath.mpf(value.numerator) / value.denominator
        return mpmath.mpf(value)

    def exp(self, x: Number) -> Number:
        return math.exp(x) if self.dps is None else mpmath.exp(x)

    def log(self, x: Number) -> Number:
        return math.log(x) if self.dps is None else mpmath.log(x)

    def fsum(self, values: Iterable[Number]) -> Number:
        return math.fsum(values) if self.dps is None else mpmath.fsum(values)

    def isfinite(self, x: Number) -> bool:
        return math.isfinite(x) if self.dps is None else bool(mpmath.isfinite(x))


FLOAT = Arithmetic()


def lost_digits(value: Number, magnitude: Number) -> float:
    """Decimal digits cancelled when terms of absolute sum ``magnitude`` give ``value``

    >>> round(lost_digits(1.0, 1000.0), 9), lost_digits(0.0, 0.0), lost_digits(0.0, 1.0)
    (3.0, 0.0, inf)
    """
    if mpmath.isnan(value) or mpmath.isnan(magnitude) or mpmath.isinf(magnitude):
        return math.inf
    if magnitude == 0:
        return 0.0
    if value == 0:
        return math.inf
    return max(0.0, float(mpmath.log10(abs(magnitude / value))))


def _next_dps(lost: float, previous: Optional[int]) -> int:
    if math.isinf(lost):
        wanted = 2 * (previous or TARGET_DIGITS + GUARD_DIGITS)
    else:
        wanted = math.ceil(lost) + TARGET_DIGITS + GUARD_DIGITS
    if previous is not None:
        wanted = max(wanted, previous + GUARD_DIGITS)
    return wanted


def escalate(
    run: Callable[[Arithmetic], T],
    loss: Callable[[T], float],
    float_loss: float,
    what: str,
) -> Tuple[T, Arithmetic]:
    """Run in floats, then in mpmath at growing precision until the loss is absorbed

    ``loss`` gives the digits a result lost to cancellation. A float result
    is kept when it lost at most ``float_loss`` digits, and an mpmath result
    when TARGET_DIGITS of its working digits survive.
    """
    outcome = run(FLOAT)
    lost = loss(outcome)
    if lost <= float_loss:
        return outcome, FLOAT
    dps: Optional[int] = None
    while True:
        dps = _next_dps(lost, dps)
        if dps > MAX_DPS:
            raise NotConverged(
                f"{what}: {lost:.0f} digits cancel, beyond {MAX_DPS} working digits"
            )
        arith = Arithmetic(dps)
        with arith.context():
            outcome = run(arith)
            lost = loss(outcome)
        if dps - lost >= TARGET_DIGITS:
            return outcome, arith
