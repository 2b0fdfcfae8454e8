import math

import pytest
from scipy.special import exp1

from sto_integrals.core import (
    EULER_GAMMA,
    DomainError,
    a_closed,
    a_towers,
    a_towers_terms,
    legendre_parts,
    tower_q_coefficients,
)

ALPHAS = [(1.5, 0.7), (0.5, 0.5), (4.0, 6.0), (10.0, 0.5)]


@pytest.mark.parametrize(
    "mu, abs_sigma", [(mu, s) for mu in range(7) for s in range(mu + 1)]
)
def test_q_coefficients_are_the_legendre_q_part(mu, abs_sigma):
    _, q_part = legendre_parts(mu, abs_sigma)
    expected = {power: c for power, c in q_part if c}
    assert tower_q_coefficients(mu, abs_sigma) == expected


@pytest.mark.parametrize("alpha1, alpha2", ALPHAS)
@pytest.mark.parametrize("r1, r2", [(0, 0), (1, 0), (0, 2), (2, 1), (3, 3)])
def test_expanded_form_matches_closed_form(alpha1, alpha2, r1, r2):
    for mu in range(4):
        for abs_sigma in range(mu + 1):
            assert a_towers(mu, r1, r2, alpha1, alpha2, abs_sigma) == pytest.approx(
                a_closed(mu, r1, r2, alpha1, alpha2, abs_sigma), rel=1e-10
            )


@pytest.mark.parametrize("mu, r1, r2, abs_sigma", [(2, 1, 0, 1), (3, 2, 2, 0)])
def test_pairing_of_xi_powers_is_interchangeable(mu, r1, r2, abs_sigma):
    direct = a_towers_terms(mu, r1, r2, 1.2, 3.4, abs_sigma)
    swapped = a_towers_terms(mu, r1, r2, 1.2, 3.4, abs_sigma, swap_pairing=True)
    assert direct[0] == pytest.approx(swapped[0], rel=1e-13)
    assert direct[1] == pytest.approx(swapped[1], rel=1e-13)


def test_expanded_form_at_mu_zero_is_classical():
    alpha1, alpha2 = 0.7, 2.5
    total = alpha1 + alpha2
    expected = (
        math.exp(-total)
        / (2 * alpha1 * alpha2)
        * (
            math.log(2 * alpha1 * alpha2 / total)
            + EULER_GAMMA
            - math.exp(2 * total) * exp1(2 * total)
            + math.exp(2 * alpha1) * exp1(2 * alpha1)
            + math.exp(2 * alpha2) * exp1(2 * alpha2)
        )
    )
    assert a_towers(0, 0, 0, alpha1, alpha2, 0) == pytest.approx(expected, rel=1e-12)


def test_expanded_form_magnitude_bounds_value():
    value, magnitude = a_towers_terms(3, 1, 2, 1.2, 0.9, 2)
    assert magnitude >= abs(value) > 0


def test_expanded_form_underflow_is_flagged_in_floats():
    value, magnitude = a_towers_terms(0, 0, 0, 400.0, 400.0, 0)
    assert math.isnan(value) and math.isnan(magnitude)
    assert a_towers(0, 0, 0, 400.0, 400.0, 0) == 0.0


def test_expanded_form_domain():
    with pytest.raises(DomainError, match="sigma"):
        a_towers(1, 0, 0, 1.0, 1.0, 2)
