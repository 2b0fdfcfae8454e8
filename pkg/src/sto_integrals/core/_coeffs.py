"""Expansion of the four orbital products into eta^g xi^r monomials

Each orbital is written about its own nucleus in prolate spheroidal coordinates.
Take a as the first nucleus and b as the second:

- r_a = (R/2)(xi + eta) and z_a = (R/2)(1 + xi eta)
- r_b = (R/2)(xi - eta) and z_b = (R/2)(xi eta - 1)
- for both nuclei, rho = (R/2) sqrt((xi^2 - 1)(1 - eta^2))

The volume element of each electron, (xi + eta)(xi - eta), is folded into the
radial powers of its orbitals. When both orbitals of an electron sit on the same
nucleus, the factor belonging to the other nucleus is left over, and it is
expanded with one extra index.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, NamedTuple, Tuple

from ._model import ELECTRON_SLOTS, Center, IntegralRequest, SlaterOrbital
from ._utils import binom, parity_sign

__all__ = [
    "CoeffTerm",
    "ExpansionIndices",
    "TermKey",
    "generate_terms",
    "iter_expansion",
    "normalization_radical",
]

#: Grouped coefficients smaller than this are cancellations polluted by rounding
ZERO_COEFF = 1e-300


class TermKey(NamedTuple):
    g1: int
    g2: int
    r1: int
    r2: int


@dataclass(frozen=True)
class CoeffTerm:
    """One grouped coefficient; g are beta-derivative and r alpha-derivative orders"""

    g1: int
    g2: int
    r1: int
    r2: int
    coeff: float
    #: Exact rational part of ``coeff``, without the normalization radical
    weight: Fraction = Fraction(0)

    @property
    def key(self) -> TermKey:
        return TermKey(self.g1, self.g2, self.r1, self.r2)


@dataclass(frozen=True)
class ExpansionIndices:
    """Summation indices of one ungrouped term

    Per-orbital tuples are in slot order 1..4. In particular ``a`` holds the
    radial indices (a1, a2, b1, b2). Per-electron tuples are (electron 1,
    electron 2). ``j`` indexes the leftover volume-element factor and stays 0
    when an electron's orbitals sit on different nuclei.
    """

    a: Tuple[int, int, int, int]
    s: Tuple[int, int, int, int]
    p: Tuple[int, int, int, int]
    q: Tuple[int, int, int, int]
    c: Tuple[int, int]
    d: Tuple[int, int]
    j: Tuple[int, int]


class _Monomial(NamedTuple):
    indices: Tuple[int, ...]
    g: int
    r: int
    weight: Fraction


def normalization_radical(orbitals: Tuple[SlaterOrbital, ...]) -> float:
    """Product of sqrt((2l+1)(l-|m|)!(l+|m|)!/(2n)!) over the four orbitals"""
    exact = Fraction(1)
    for orb in orbitals:
        am = abs(orb.m)
        exact *= Fraction(
            (2 * orb.l + 1) * math.factorial(orb.l - am) * math.factorial(orb.l + am),
            math.factorial(2 * orb.n),
        )
    return math.sqrt(exact)


def _orbital_monomials(
    orb: SlaterOrbital, center: Center, radial_power: int
) -> List[_Monomial]:
    """Monomials of one orbital's polynomial part, indexed by (a, s, p, q)

    The weight carries (-1)^s binom(l, s) binom(2l-2s, l-|m|-2s) / (2^l l!).
    It also carries the sign of every eta that comes from a centre-b factor,
    together with the (-1)^(l-|m|) of z_b.
    """
    am = abs(orb.m)
    big_l = orb.l - am
    on_b = center is Center.B
    scale = Fraction(1, 2**orb.l * math.factorial(orb.l))
    monomials = []
    for s in range(big_l // 2 + 1):
        legendre = (
            parity_sign(s) * binom(orb.l, s) * binom(2 * orb.l - 2 * s, big_l - 2 * s)
        )
        for a, p, q in itertools.product(
            range(radial_power + 1), range(2 * s + 1), range(big_l - 2 * s + 1)
        ):
            weight = legendre * binom(radial_power, a) * binom(2 * s, p)
            weight *= binom(big_l - 2 * s, q)
            if on_b:
                weight *= parity_sign(a + p + q + big_l)
            r = radial_power - a + 2 * s - p + q
            assert r >= 0, f"negative xi power {r} for {orb}"
            monomials.append(_Monomial((a, s, p, q), a + p + q, r, scale * weight))
    return monomials


def _residue_monomials(leftover: Center | None) -> List[_Monomial]:
    if leftover is None:
        return [_Monomial((0,), 0, 0, Fraction(1))]
    eta_sign = -1 if leftover is Center.B else 1
    return [
        _Monomial((0,), 0, 1, Fraction(1)),
        _Monomial((1,), 1, 0, Fraction(eta_sign)),
    ]


def _azimuthal_monomials(
    m_first: int, m_second: int, abs_sigma: int
) -> List[_Monomial]:
    twice_bound = abs(m_first) + abs(m_second) - abs_sigma
    assert twice_bound >= 0 and twice_bound % 2 == 0, (
        f"|m| bound {twice_bound}/2 is not a non-negative integer"
    )
    bound = twice_bound // 2
    return [
        _Monomial(
            (c, d),
            2 * c,
            2 * d,
            Fraction(parity_sign(c + d) * binom(bound, c) * binom(bound, d)),
        )
        for c, d in itertools.product(range(bound + 1), repeat=2)
    ]


def _electron_factors(
    req: IntegralRequest, electron: int, abs_sigma: int
) -> Tuple[List[_Monomial], List[_Monomial], List[_Monomial], List[_Monomial]]:
    first, second = ELECTRON_SLOTS[electron]
    orb1, orb2 = req.orbitals[first], req.orbitals[second]
    c1, c2 = req.centers[first], req.centers[second]
    leftover: Center | None = Center.B if c1 is Center.A else Center.A
    power1 = orb1.n - orb1.l
    power2 = orb2.n - orb2.l - 1
    if c2 is leftover:
        power2 += 1
        leftover = None
    return (
        _orbital_monomials(orb1, c1, power1),
        _orbital_monomials(orb2, c2, power2),
        _residue_monomials(leftover),
        _azimuthal_monomials(orb1.m, orb2.m, abs_sigma),
    )


def _electron_polynomial(
    req: IntegralRequest, electron: int, abs_sigma: int
) -> Dict[Tuple[int, int], Fraction]:
    grouped: Dict[Tuple[int, int], Fraction] = {}
    for parts in itertools.product(*_electron_factors(req, electron, abs_sigma)):
        key = (sum(part.g for part in parts), sum(part.r for part in parts))
        weight = math.prod((part.weight for part in parts), start=Fraction(1))
        grouped[key] = grouped.get(key, Fraction(0)) + weight
    return grouped


def generate_terms(req: IntegralRequest, sigma: int) -> List[CoeffTerm]:
    """Grouped coefficients C(g1, g2, r1, r2), sorted by key

    Electron 1 alone fixes (g1, r1) and electron 2 alone fixes (g2, r2).
    Accumulating each electron's monomials before the outer product therefore
    gives the same exact rationals as accumulating every index tuple.

    >>> from sto_integrals.core import make_request
    >>> req = make_request(["1 0 0 1.0"] * 4, 2.0)
    >>> for term in generate_terms(req, 0):
    ...     print(tuple(term.key), term.coeff)
    (0, 0, 2, 2) 0.125
    (0, 2, 2, 0) -0.125
    (2, 0, 0, 2) -0.125
    (2, 2, 0, 0) 0.125
    """
    abs_sigma = abs(sigma)
    electron1 = _electron_polynomial(req, 0, abs_sigma)
    electron2 = _electron_polynomial(req, 1, abs_sigma)
    radical = normalization_radical(req.orbitals)
    terms = []
    for (g1, r1), w1 in electron1.items():
        for (g2, r2), w2 in electron2.items():
            exact = Fraction(1, 2) * w1 * w2
            if exact == 0:
                continue
            coeff = float(exact) * radical
            if abs(coeff) < ZERO_COEFF:
                continue
            terms.append(CoeffTerm(g1, g2, r1, r2, coeff, exact))
    terms.sort(key=lambda term: term.key)
    return terms


def iter_expansion(
    req: IntegralRequest, sigma: int
) -> Iterator[Tuple[ExpansionIndices, TermKey, Fraction]]:
    """Every ungrouped index tuple with its key and exact rational weight

    The weight excludes the common normalization radical. The global factor of
    1/2 is included.
    """
    abs_sigma = abs(sigma)
    factors1 = _electron_factors(req, 0, abs_sigma)
    factors2 = _electron_factors(req, 1, abs_sigma)
    (slot1, slot3), (slot2, slot4) = ELECTRON_SLOTS
    for parts1 in itertools.product(*factors1):
        for parts2 in itertools.product(*factors2):
            by_slot = {
                slot1: parts1[0],
                slot3: parts1[1],
                slot2: parts2[0],
                slot4: parts2[1],
            }
            orbital_idx = [by_slot[slot].indices for slot in range(4)]
            indices = ExpansionIndices(
                a=tuple(idx[0] for idx in orbital_idx),  # type: ignore[arg-type]
                s=tuple(idx[1] for idx in orbital_idx),  # type: ignore[arg-type]
                p=tuple(idx[2] for idx in orbital_idx),  # type: ignore[arg-type]
                q=tuple(idx[3] for idx in orbital_idx),  # type: ignore[arg-type]
                c=(parts1[3].indices[0], parts2[3].indices[0]),
                d=(parts1[3].indices[1], parts2[3].indices[1]),
                j=(parts1[2].indices[0], parts2[2].indices[0]),
            )
            key = TermKey(
                sum(part.g for part in parts1),
                sum(part.g for part in parts2),
                sum(part.r for part in parts1),
                sum(part.r for part in parts2),
            )
            weight = Fraction(1, 2) * math.prod(
                (part.weight for part in (*parts1, *parts2)), start=Fraction(1)
            )
            yield indices, key, weight
