"""Invariant and oracle-equivalence checks run by ``sto-integrals verify``

Every check takes the grid size and a seeded random generator, and raises
AssertionError or an IntegralError describing the first mismatch it finds.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from ..core import (
    IntegralClass,
    IntegralError,
    IntegralRequest,
    SlaterOrbital,
    VerificationFailed,
    a_closed,
    a_towers,
    b_alternating,
    b_series,
    b_zero,
    evaluate,
    generate_terms,
    iter_expansion,
    legendre_parts,
    make_request,
    normalization_radical,
    tower_q_coefficients,
    w_forms,
)
from ..log import case_logger
from ._bessel import b_derivative_oracle
from ._classical import coulomb_1s_closed, coulomb_1s_quadrature, exchange_1s_oracle
from ._quadrature import a_quadrature

__all__ = [
    "CHECKS",
    "CheckResult",
    "Grid",
    "center_swap",
    "electron_swap",
    "negate_m",
    "random_requests",
    "run_checks",
    "verify",
]

DEFAULT_SEED = 20240613
SYMMETRY_REL = 1e-11
SYMMETRY_ABS = 1e-14


class Grid(str, Enum):
    SMALL = "small"
    FULL = "full"


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    elapsed: float = 0.0


Check = Callable[[Grid, np.random.Generator], None]


def _expect_close(
    label: str, got: float, want: float, rel: float, abs_tol: float = 0.0
) -> None:
    if not math.isclose(got, want, rel_tol=rel, abs_tol=abs_tol):
        raise AssertionError(
            f"{label}: got {got:.17g}, expected {want:.17g} (rel {rel:g})"
        )


def electron_swap(req: IntegralRequest) -> IntegralRequest:
    """Exchange the two electrons, valid for the exchange class"""
    o1, o2, o3, o4 = req.orbitals
    return replace(req, orbitals=(o2, o1, o4, o3))


def center_swap(req: IntegralRequest) -> tuple[IntegralRequest, int]:
    """Mirror the molecule through its midpoint, with the parity picked up

    Supported for the exchange and Coulomb classes.
    """
    o1, o2, o3, o4 = req.orbitals
    if req.integral_class is IntegralClass.EXCHANGE:
        swapped = (o3, o4, o1, o2)
    elif req.integral_class is IntegralClass.COULOMB:
        swapped = (o2, o1, o4, o3)
    else:
        raise ValueError(f"no center swap for the {req.integral_class.value} class")
    parity = (-1) ** sum(orb.l - abs(orb.m) for orb in req.orbitals)
    return replace(req, orbitals=swapped), parity


def negate_m(req: IntegralRequest) -> IntegralRequest:
    return replace(req, orbitals=tuple(replace(orb, m=-orb.m) for orb in req.orbitals))


def _random_orbital(rng: np.random.Generator, max_l: int) -> SlaterOrbital:
    l = int(rng.integers(0, max_l + 1))  # noqa: E741
    n = int(rng.integers(l + 1, l + 3))
    m = int(rng.integers(-l, l + 1))
    return SlaterOrbital(n, l, m, round(float(rng.uniform(0.6, 2.0)), 3))


def random_requests(
    rng: np.random.Generator,
    count: int,
    integral_class: IntegralClass,
    max_l: int = 2,
    conserve_m: bool = True,
) -> List[IntegralRequest]:
    """Random valid requests; with ``conserve_m`` the m values sum to 0"""
    requests = []
    while len(requests) < count:
        orbitals = [_random_orbital(rng, max_l) for _ in range(4)]
        if conserve_m and sum(orb.m for orb in orbitals) != 0:
            continue
        distance = round(float(rng.uniform(0.5, 4.0)), 3)
        requests.append(make_request(orbitals, distance, integral_class))
    return requests


def check_w_forms(grid: Grid, rng: np.random.Generator) -> None:
    count = 10_000 if grid is Grid.FULL else 200
    for req in random_requests(rng, count, IntegralClass.EXCHANGE, 3, False):
        first, second, third = w_forms(req)
        _expect_close(f"W second form {req}", second, first, 1e-12)
        _expect_close(f"W third form {req}", third, first, 1e-12)


def _b_grid(grid: Grid) -> Iterable[tuple[int, int, int, float]]:
    if grid is Grid.FULL:
        mus, gs, betas = range(9), range(7), (0.1, 1.0, 5.0, 20.0)
        max_sigma = 4
    else:
        mus, gs, betas = range(4), range(3), (0.1, 1.0, 5.0)
        max_sigma = 2
    for mu, g, beta in itertools.product(mus, gs, betas):
        for abs_sigma in range(min(mu, max_sigma) + 1):
            for signed in (beta, -beta):
                yield mu, g, abs_sigma, signed


def check_b_cross_paths(grid: Grid, rng: np.random.Generator) -> None:
    for mu, g, abs_sigma, beta in _b_grid(grid):
        series = b_series(mu, g, beta, abs_sigma)
        label = f"B({mu}, {g}, {beta}, {abs_sigma})"
        _expect_close(
            f"{label} alternating", b_alternating(mu, g, beta, abs_sigma), series, 1e-9
        )
        if g <= 2:
            derivative = b_derivative_oracle(mu, g, beta, abs_sigma, richardson=True)
            _expect_close(f"{label} finite difference", derivative, series, 1e-6)


def check_b_parity(grid: Grid, rng: np.random.Generator) -> None:
    for mu, g, abs_sigma, beta in _b_grid(grid):
        if beta < 0:
            continue
        flipped = b_series(mu, g, -beta, abs_sigma)
        expected = (-1) ** ((mu - abs_sigma - g) % 2) * b_series(mu, g, beta, abs_sigma)
        if flipped != expected:
            raise AssertionError(f"B({mu}, {g}, +-{beta}, {abs_sigma}) parity broken")
        if (g + abs_sigma - mu) % 2 == 0:
            at_zero = b_zero(mu, g, abs_sigma)
            near_zero = b_series(mu, g, 1e-6, abs_sigma)
            if abs(near_zero - at_zero) > 1e-10 * max(1.0, abs(at_zero)):
                raise AssertionError(
                    f"B({mu}, {g}, 1e-6, {abs_sigma}) = {near_zero!r} is not "
                    f"continuous with B at 0 = {at_zero!r}"
                )


def _a_grid(grid: Grid) -> Iterable[tuple[int, int, int, int, float, float]]:
    if grid is Grid.FULL:
        mus, max_sigma, rs = range(5), 2, range(4)
        alphas = list(itertools.product((0.5, 1.0, 2.0, 5.0, 10.0), repeat=2))
    else:
        mus, max_sigma, rs = range(2), 1, range(2)
        alphas = [(1.0, 2.0), (2.5, 1.5)]
    for mu in mus:
        for abs_sigma in range(min(mu, max_sigma) + 1):
            for r1, r2 in itertools.product(rs, repeat=2):
                for alpha1, alpha2 in alphas:
                    yield mu, r1, r2, abs_sigma, alpha1, alpha2


def check_a_closed_vs_quadrature(grid: Grid, rng: np.random.Generator) -> None:
    for mu, r1, r2, abs_sigma, alpha1, alpha2 in _a_grid(grid):
        closed = a_closed(mu, r1, r2, alpha1, alpha2, abs_sigma)
        numeric = a_quadrature(mu, r1, r2, alpha1, alpha2, abs_sigma)
        _expect_close(
            f"A({mu}, {r1}, {r2}, {alpha1}, {alpha2}, {abs_sigma})",
            closed,
            numeric,
            1e-8,
            1e-12,
        )


def check_a_derivative(grid: Grid, rng: np.random.Generator) -> None:
    step = 1e-4
    max_mu, max_r = (4, 2) if grid is Grid.FULL else (2, 1)
    for mu in range(max_mu + 1):
        for abs_sigma in range(mu + 1):
            for r1, r2 in itertools.product(range(max_r + 1), repeat=2):
                for alpha1, alpha2 in ((1.5, 2.5), (3.0, 1.0)):
                    lower = a_closed(mu, r1, r2, alpha1 - step, alpha2, abs_sigma)
                    upper = a_closed(mu, r1, r2, alpha1 + step, alpha2, abs_sigma)
                    _expect_close(
                        f"dA/dalpha1 at ({mu}, {r1}, {r2}, {alpha1}, {abs_sigma})",
                        (lower - upper) / (2 * step),
                        a_closed(mu, r1 + 1, r2, alpha1, alpha2, abs_sigma),
                        1e-6,
                    )


def check_a_expanded_form(grid: Grid, rng: np.random.Generator) -> None:
    max_mu, max_sigma, max_r = (4, 2, 2) if grid is Grid.FULL else (2, 1, 1)
    for mu in range(max_mu + 1):
        for abs_sigma in range(min(mu, max_sigma) + 1):
            expanded = tower_q_coefficients(mu, abs_sigma)
            if expanded != dict(legendre_parts(mu, abs_sigma)[1]):
                raise AssertionError(
                    f"Qtilde polynomial part differs at ({mu}, {abs_sigma})"
                )
            for r1, r2 in itertools.product(range(max_r + 1), repeat=2):
                for alpha1, alpha2 in ((1.5, 0.7), (4.0, 6.0)):
                    _expect_close(
                        f"A expanded form ({mu}, {r1}, {r2}, {alpha1}, {alpha2}, "
                        f"{abs_sigma})",
                        a_towers(mu, r1, r2, alpha1, alpha2, abs_sigma),
                        a_closed(mu, r1, r2, alpha1, alpha2, abs_sigma),
                        1e-10,
                    )


def _coulomb_grid(grid: Grid) -> Iterable[tuple[float, float]]:
    if grid is Grid.FULL:
        return itertools.product((0.8, 1.0, 1.5), (0.5, 1.4, 3.0, 10.0))
    return itertools.product((1.0,), (0.5, 1.4, 3.0))


def check_coulomb_classical(grid: Grid, rng: np.random.Generator) -> None:
    for zeta, distance in ((1.0, 1.4), (0.8, 3.0), (1.5, 0.5)):
        _expect_close(
            f"Coulomb 1s closed vs quadrature ({zeta}, {distance})",
            coulomb_1s_closed(zeta, distance),
            coulomb_1s_quadrature(zeta, distance),
            1e-8,
        )
    _expect_close("R J at R=50", 50 * coulomb_1s_closed(1.0, 50.0), 1.0, 1e-6)
    _expect_close("J at R=1e-4", coulomb_1s_closed(1.0, 1e-4), 5 / 8, 1e-3)


def check_coulomb_engine(grid: Grid, rng: np.random.Generator) -> None:
    for zeta, distance in _coulomb_grid(grid):
        orbital = SlaterOrbital(1, 0, 0, zeta)
        req = make_request([orbital] * 4, distance, IntegralClass.COULOMB)
        _expect_close(
            f"Coulomb 1s engine ({zeta}, {distance})",
            evaluate(req).value,
            coulomb_1s_closed(zeta, distance),
            1e-10,
        )


def check_exchange_engine(grid: Grid, rng: np.random.Generator) -> None:
    cases: Sequence[tuple[float, float, float]]
    if grid is Grid.FULL:
        cases = [
            (zeta, zeta, distance) for zeta, distance in _coulomb_grid(grid)
        ] + [(1.2, 0.8, 2.0), (0.7, 1.3, 1.4), (1.5, 1.0, 3.0)]
    else:
        cases = [(1.0, 1.0, 1.4), (1.2, 0.8, 2.0)]
    for zeta1, zeta2, distance in cases:
        first, second = SlaterOrbital(1, 0, 0, zeta1), SlaterOrbital(1, 0, 0, zeta2)
        req = make_request([first, first, second, second], distance)
        _expect_close(
            f"exchange 1s engine ({zeta1}, {zeta2}, {distance})",
            evaluate(req).value,
            exchange_1s_oracle(zeta1, zeta2, distance),
            1e-7,
        )


def check_engine_symmetries(grid: Grid, rng: np.random.Generator) -> None:
    count = 40 if grid is Grid.FULL else 4
    for req in random_requests(rng, count, IntegralClass.EXCHANGE):
        value = evaluate(req).value
        _expect_close(
            f"electron swap {req}",
            evaluate(electron_swap(req)).value,
            value,
            SYMMETRY_REL,
            SYMMETRY_ABS,
        )
    for integral_class in (IntegralClass.EXCHANGE, IntegralClass.COULOMB):
        for req in random_requests(rng, count, integral_class):
            swapped, parity = center_swap(req)
            _expect_close(
                f"center swap {req}",
                parity * evaluate(swapped).value,
                evaluate(req).value,
                SYMMETRY_REL,
                SYMMETRY_ABS,
            )
    for integral_class in IntegralClass:
        for req in random_requests(rng, count, integral_class):
            _expect_close(
                f"m negation {req}",
                evaluate(negate_m(req)).value,
                evaluate(req).value,
                SYMMETRY_REL,
                SYMMETRY_ABS,
            )
    for req in random_requests(rng, count, IntegralClass.EXCHANGE, conserve_m=False):
        if sum(req.ms) == 0:
            continue
        result = evaluate(req)
        if not (result.zero_by_selection and result.value == 0.0):
            raise AssertionError(f"selection zero not exact for {req}: {result}")
    for first, second in zip(
        (_random_orbital(rng, 2) for _ in range(count)),
        (_random_orbital(rng, 2) for _ in range(count)),
    ):
        first, second = replace(first, m=0), replace(second, m=0)
        req = make_request([first, second, first, second], 1.5, IntegralClass.COULOMB)
        value = evaluate(req).value
        if not value > 0:
            raise AssertionError(f"Coulomb self-density {req} is not positive: {value}")


def check_scaling(grid: Grid, rng: np.random.Generator) -> None:
    zetas = (0.8, 1.0, 1.5) if grid is Grid.FULL else (1.0,)
    for integral_class, zeta, distance, factor in itertools.product(
        IntegralClass, zetas, (0.5, 1.4, 3.0), (0.5, 2.0)
    ):
        orbitals = [SlaterOrbital(1, 0, 0, zeta * (1 + k / 10)) for k in range(4)]
        base = make_request(orbitals, distance, integral_class)
        scaled = make_request(
            [replace(orb, delta=factor * orb.delta) for orb in orbitals],
            distance / factor,
            integral_class,
        )
        _expect_close(
            f"scaling by {factor} of {base}",
            evaluate(scaled).value,
            factor * evaluate(base).value,
            1e-11,
        )


def check_coefficient_grouping(grid: Grid, rng: np.random.Generator) -> None:
    ones = make_request(["1 0 0 1.0"] * 4, 2.0)
    table = {tuple(term.key): term.coeff for term in generate_terms(ones, 0)}
    expected = {(0, 0, 2, 2): 0.125, (0, 2, 2, 0): -0.125}
    expected.update({(2, 0, 0, 2): -0.125, (2, 2, 0, 0): 0.125})
    if table != expected:
        raise AssertionError(f"four-1s coefficient table is {table}")
    count = 12 if grid is Grid.FULL else 3
    for integral_class in IntegralClass:
        for req in random_requests(rng, count, integral_class):
            sigma = req.orbitals[1].m + req.orbitals[3].m
            radical = normalization_radical(req.orbitals)
            terms = generate_terms(req, sigma)
            expansion = list(iter_expansion(req, sigma))
            for x, y, u, v in rng.uniform(0.5, 1.5, size=(3, 4)):
                grouped = math.fsum(
                    t.coeff * x**t.g1 * y**t.g2 * u**t.r1 * v**t.r2 for t in terms
                )
                ungrouped = radical * math.fsum(
                    float(weight) * x**k.g1 * y**k.g2 * u**k.r1 * v**k.r2
                    for _, k, weight in expansion
                )
                _expect_close(
                    f"grouping {req}", grouped, ungrouped, 1e-13, 1e-13 * radical
                )


CHECKS: Dict[str, Check] = {
    "w_forms": check_w_forms,
    "b_cross_paths": check_b_cross_paths,
    "b_parity": check_b_parity,
    "a_closed_vs_quadrature": check_a_closed_vs_quadrature,
    "a_derivative": check_a_derivative,
    "a_expanded_form": check_a_expanded_form,
    "coulomb_classical": check_coulomb_classical,
    "coulomb_engine": check_coulomb_engine,
    "exchange_engine": check_exchange_engine,
    "engine_symmetries": check_engine_symmetries,
    "scaling": check_scaling,
    "coefficient_grouping": check_coefficient_grouping,
}


def run_checks(
    grid: Grid | str = Grid.SMALL,
    names: Optional[Sequence[str]] = None,
    seed: int = DEFAULT_SEED,
) -> List[CheckResult]:
    """Run the named checks (all by default), never raising for a failure"""
    grid = Grid(grid)
    results = []
    for name in names or CHECKS:
        log = case_logger("oracle", name)
        rng = np.random.default_rng(seed)
        start = time.perf_counter()
        try:
            CHECKS[name](grid, rng)
        except (AssertionError, IntegralError, ArithmeticError) as error:
            log.info("failed: %s", error)
            passed, detail = False, f"{type(error).__name__}: {error}"
        else:
            log.debug("passed")
            passed, detail = True, ""
        results.append(CheckResult(name, passed, detail, time.perf_counter() - start))
    return results


def verify(grid: Grid | str = Grid.SMALL, seed: int = DEFAULT_SEED) -> None:
    """Run every check, raising VerificationFailed naming each failing one"""
    failures: Dict[str, Exception] = {
        result.name: AssertionError(result.detail)
        for result in run_checks(grid, seed=seed)
        if not result.passed
    }
    if failures:
        raise VerificationFailed(failures)
