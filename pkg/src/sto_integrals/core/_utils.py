from __future__ import annotations

import math
from typing import Dict, Iterable, Union

ErrorText = Union[str, Dict[str, Exception]]


class ZeroBySelection:
    """Sentinel class returned by ``selection_check`` when sum(m) != 0

    This signifies that the integral vanishes identically by the azimuthal
    selection rule; it is a valid outcome, not an error.
    """


class IntegralError(Exception):
    """Base of every error raised while evaluating an integral"""


class InvalidQuantumNumbers(IntegralError, ValueError):
    """An orbital violates n >= 1, 0 <= l <= n - 1 or |m| <= l"""


class NonpositiveExponent(IntegralError, ValueError):
    """A screening constant is not strictly positive"""


class NonpositiveDistance(IntegralError, ValueError):
    """The internuclear distance is not strictly positive"""


class DomainError(IntegralError, ValueError):
    """A special function was called outside its domain"""


class SeriesNotConverged(IntegralError, ArithmeticError):
    """The ascending B series ran out of terms before meeting its tolerance"""


class NotConverged(IntegralError, ArithmeticError):
    """The mu-sum hit mu_cap, or produced a non-finite shell"""


class QuadratureNotConverged(IntegralError, ArithmeticError):
    """An oracle quadrature did not reach its requested error"""


class VerificationFailed(IntegralError):
    """Raised by the verify suites, holding a mapping of check name to failure"""

    _indent_width = "    "

    def __init__(self, errors: ErrorText):
        """
        VerificationFailed holds a mapping of check names to errors.

        Parameters
        ----------
        errors: ErrorText
            Mapping of check name to Exception or another VerificationFailed.
            Alternatively a string with the failure text.
        """
        super().__init__(errors)
        self._errors = errors

    @property
    def errors(self) -> ErrorText:
        return self._errors

    def _format_sub_errors(self, name: str, error: Exception, indent="") -> str:
        if isinstance(error, VerificationFailed):
            error_txt = ":" + error.format_error_string(indent + self._indent_width)
        elif isinstance(error, Exception):
            error_txt = ": " + err_str + "\n" if (err_str := str(error)) else "\n"
        else:
            raise RuntimeError(
                f"Unexpected type `{type(error)}`, expected an Exception"
            )

        return f"{indent}{name}: {type(error).__name__}" + error_txt

    def format_error_string(self, indent="") -> str:
        if isinstance(self._errors, str):
            return " " + self._errors + "\n"
        if not isinstance(self._errors, dict):
            raise RuntimeError(
                f"Unexpected type `{type(self._errors)}` expected `str` or `dict`"
            )

        string = "\n"
        for name, error in self._errors.items():
            string += self._format_sub_errors(name, error, indent=indent)
        return string

    def __str__(self) -> str:
        return self.format_error_string(indent="")


def binom(n: int, k: int) -> int:
    """Binomial coefficient that vanishes outside 0 <= k <= n

    >>> binom(5, 2), binom(2, 5), binom(3, -1), binom(-1, 0)
    (10, 0, 0, 0)
    """
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def falling(n: int, k: int) -> int:
    """Falling factorial n!/(n-k)! as a product, never as a factorial quotient

    >>> falling(5, 0), falling(5, 2), falling(5, 5)
    (1, 20, 120)
    """
    return math.perm(n, k)


def parity_sign(k: int) -> int:
    """(-1)**k for any integer k"""
    return -1 if k % 2 else 1


def compensated_sum(values: Iterable[float]) -> float:
    """Correctly rounded sum, used for every accumulation that can cancel"""
    return math.fsum(values)
