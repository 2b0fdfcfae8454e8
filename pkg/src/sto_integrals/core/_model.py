from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple, Type

from ._utils import (
    InvalidQuantumNumbers,
    NonpositiveDistance,
    NonpositiveExponent,
    ZeroBySelection,
)


class IntegralClass(str, Enum):
    EXCHANGE = "exchange"
    HYBRID = "hybrid"
    COULOMB = "coulomb"


class Center(str, Enum):
    A = "a"
    B = "b"


#: Nucleus of orbitals 1..4 for each class. Electron 1 carries orbitals (1, 3)
#: and electron 2 carries orbitals (2, 4).
ORBITAL_CENTERS: dict[IntegralClass, Tuple[Center, Center, Center, Center]] = {
    IntegralClass.EXCHANGE: (Center.A, Center.A, Center.B, Center.B),
    IntegralClass.HYBRID: (Center.A, Center.A, Center.A, Center.B),
    IntegralClass.COULOMB: (Center.A, Center.B, Center.A, Center.B),
}

#: Orbital slots (0-based) belonging to each electron
ELECTRON_SLOTS: Tuple[Tuple[int, int], Tuple[int, int]] = ((0, 2), (1, 3))


@dataclass(frozen=True)
class SlaterOrbital:
    """Normalized Slater-type orbital on one nucleus

    r^(n-1) exp(-delta r) P_l^|m|(cos theta) exp(i m phi), without the
    Condon-Shortley phase.
    """

    n: int
    l: int  # noqa: E741
    m: int
    delta: float

    @classmethod
    def parse(cls, text: str) -> SlaterOrbital:
        """Build from the ``"n l m delta"`` command line form

        >>> SlaterOrbital.parse("2 1 -1 0.75")
        SlaterOrbital(n=2, l=1, m=-1, delta=0.75)
        """
        fields = text.replace(",", " ").split()
        if len(fields) != 4:
            raise ValueError(f"expected 'n l m delta', got {text!r}")
        n, l, m = (int(f) for f in fields[:3])  # noqa: E741
        return cls(n, l, m, float(fields[3]))


@dataclass(frozen=True)
class IntegralRequest:
    """Four orbitals in the slot order 1..4, internuclear distance and class"""

    orbitals: Tuple[SlaterOrbital, SlaterOrbital, SlaterOrbital, SlaterOrbital]
    distance: float
    integral_class: IntegralClass = IntegralClass.EXCHANGE

    @property
    def centers(self) -> Tuple[Center, Center, Center, Center]:
        return ORBITAL_CENTERS[self.integral_class]

    @property
    def ms(self) -> Tuple[int, int, int, int]:
        return tuple(orb.m for orb in self.orbitals)  # type: ignore[return-value]


@dataclass(frozen=True)
class ScaledParams:
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    sigma: int
    w: float

    @property
    def abs_sigma(self) -> int:
        return abs(self.sigma)


def make_request(
    orbitals: Sequence[SlaterOrbital | Sequence[float] | str],
    distance: float,
    integral_class: IntegralClass | str = IntegralClass.EXCHANGE,
) -> IntegralRequest:
    """Convenience constructor accepting orbitals as objects, tuples or strings"""
    built = []
    for orb in orbitals:
        if isinstance(orb, SlaterOrbital):
            built.append(orb)
        elif isinstance(orb, str):
            built.append(SlaterOrbital.parse(orb))
        else:
            n, l, m, delta = orb  # noqa: E741
            built.append(SlaterOrbital(int(n), int(l), int(m), float(delta)))
    if len(built) != 4:
        raise ValueError(f"an integral needs 4 orbitals, got {len(built)}")
    return IntegralRequest(
        tuple(built), float(distance), IntegralClass(integral_class)  # type: ignore
    )


def validate_request(req: IntegralRequest) -> IntegralRequest:
    """Return the request unchanged if every orbital and R are valid"""
    for slot, orb in enumerate(req.orbitals, start=1):
        if orb.n < 1 or not 0 <= orb.l <= orb.n - 1 or abs(orb.m) > orb.l:
            raise InvalidQuantumNumbers(
                f"orb{slot}: need n >= 1, 0 <= l <= n-1, |m| <= l, "
                f"got n={orb.n} l={orb.l} m={orb.m}"
            )
        if not orb.delta > 0 or not math.isfinite(orb.delta):
            raise NonpositiveExponent(
                f"orb{slot}: screening constant must be positive, got {orb.delta}"
            )
    if not req.distance > 0 or not math.isfinite(req.distance):
        raise NonpositiveDistance(
            f"R: internuclear distance must be positive, got {req.distance}"
        )
    return req


def selection_check(
    m1: int, m2: int, m3: int, m4: int
) -> int | Type[ZeroBySelection]:
    """Signed sigma = m2 + m4, or ZeroBySelection when the m values do not sum to 0

    >>> selection_check(1, -1, -1, 1)
    0
    >>> selection_check(1, 0, 0, 0).__name__
    'ZeroBySelection'
    """
    if m1 + m2 + m3 + m4 != 0:
        return ZeroBySelection
    return m2 + m4


def _exchange_ab(req: IntegralRequest) -> Tuple[float, float, float, float]:
    d1, d2, d3, d4 = (orb.delta for orb in req.orbitals)
    half_r = req.distance / 2
    return (
        half_r * (d1 + d3),
        half_r * (d2 + d4),
        half_r * (d1 - d3),
        half_r * (d2 - d4),
    )


def w_forms(req: IntegralRequest) -> Tuple[float, float, float]:
    """The three algebraically identical forms of the W prefactor

        R^(n1+n2+n3+n4+1) prod delta_i^(n_i+1/2)
        delta1 (a1+b1)^(n1-1/2) (a1-b1)^(n3+1/2) (a2+b2)^(n2+1/2) (a2-b2)^(n4+1/2)
        (a1+b1)^(n1+1/2) (a1-b1)^(n3+1/2) (a2+b2)^(n2+1/2) (a2-b2)^(n4+1/2) / R

    The last two use the exchange-style alpha and beta of the raw screening
    constants whatever the class, so that a1 + b1 = R delta1 and so on.

    >>> req = make_request(["1 0 0 1.0", "2 1 0 0.5", "1 0 0 2.0", "3 2 0 1.5"], 1.4)
    >>> first, second, third = w_forms(req)
    >>> [math.isclose(first, w, rel_tol=1e-13) for w in (second, third)]
    [True, True]
    """
    n1, n2, n3, n4 = (orb.n for orb in req.orbitals)
    a1, a2, b1, b2 = _exchange_ab(req)
    pairs = (
        (a1 - b1) ** (n3 + 0.5) * (a2 + b2) ** (n2 + 0.5) * (a2 - b2) ** (n4 + 0.5)
    )
    first = _w_first(req)
    second = req.orbitals[0].delta * (a1 + b1) ** (n1 - 0.5) * pairs
    third = (a1 + b1) ** (n1 + 0.5) * pairs / req.distance
    return first, second, third


def scale_parameters(req: IntegralRequest, verify: bool = False) -> ScaledParams:
    """alpha, beta, sigma and W of a validated request

    With ``verify`` the three W forms are checked against each other.
    """
    sigma = selection_check(*req.ms)
    if sigma is ZeroBySelection:
        sigma = req.orbitals[1].m + req.orbitals[3].m
    assert isinstance(sigma, int)
    a1, a2, b1, b2 = _exchange_ab(req)
    if req.integral_class is IntegralClass.HYBRID:
        b1 = a1
    elif req.integral_class is IntegralClass.COULOMB:
        b1 = a1
        b2 = -a2
    w, *others = w_forms(req) if verify else (_w_first(req),)
    for other in others:
        assert math.isclose(w, other, rel_tol=1e-12), f"W forms differ: {w}, {other}"
    return ScaledParams(a1, a2, b1, b2, sigma, w)


def _w_first(req: IntegralRequest) -> float:
    total_n = sum(orb.n for orb in req.orbitals)
    return req.distance ** (total_n + 1) * math.prod(
        orb.delta ** (orb.n + 0.5) for orb in req.orbitals
    )
