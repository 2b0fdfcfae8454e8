from __future__ import annotations

import cmath
import math

from scipy.special import lpmv

from ..core import DomainError, SlaterOrbital

__all__ = ["orbital_normalization", "orbital_value"]


def orbital_normalization(orb: SlaterOrbital) -> float:
    """Phase times radial and angular normalization of one orbital"""
    am = abs(orb.m)
    phase = (-1) ** ((orb.m - am) // 2)
    angular = (
        (2 * orb.l + 1)
        * math.factorial(orb.l - am)
        / (4 * math.pi * math.factorial(2 * orb.n) * math.factorial(orb.l + am))
    )
    return phase * (2 * orb.delta) ** (orb.n + 0.5) * math.sqrt(angular)


def orbital_value(orb: SlaterOrbital, r: float, theta: float, phi: float) -> complex:
    """Normalized orbital at spherical coordinates about its own nucleus

    >>> orb = SlaterOrbital(1, 0, 0, 1.0)
    >>> round(abs(orbital_value(orb, 0.0, 0.3, 0.0)) ** 2 * math.pi, 12)
    1.0
    """
    if r < 0:
        raise DomainError(f"radial distance must be non-negative, got {r}")
    am = abs(orb.m)
    # lpmv carries the Condon-Shortley phase
    angular = (-1) ** am * float(lpmv(am, orb.l, math.cos(theta)))
    radial = r ** (orb.n - 1) * math.exp(-orb.delta * r)
    return orbital_normalization(orb) * radial * angular * cmath.exp(1j * orb.m * phi)
