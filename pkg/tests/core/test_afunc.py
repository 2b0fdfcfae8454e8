import math

import pytest
from scipy.special import exp1

from sto_integrals.core import (
    EULER_GAMMA,
    AEvaluator,
    Arithmetic,
    DomainError,
    a_closed,
    a_closed_terms,
    exp_e1,
    exp_e1_scaled,
    legendre_parts,
)
from sto_integrals.oracle import legendre_p, legendre_q


@pytest.mark.parametrize("x", [1e-3, 0.25, 1.0, 1.5, 4.0, 30.0, 200.0])
def test_e1_matches_scipy(x):
    assert exp_e1(x) == pytest.approx(exp1(x), rel=1e-13)


def test_scaled_e1_does_not_overflow():
    x = 800.0
    assert exp_e1_scaled(x) == pytest.approx(
        (1 - 1 / x + 2 / x**2 - 6 / x**3) / x, rel=1e-9
    )


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_e1_domain(x):
    with pytest.raises(DomainError, match="x > 0"):
        exp_e1(x)
    with pytest.raises(DomainError):
        exp_e1_scaled(x)


def test_legendre_parts_first_order():
    p_part, q_part = legendre_parts(1, 1)
    # (x^2-1) d/dx of P_1 = x and of Q_1 = x L/2 - 1
    assert dict(p_part) == {2: 1, 0: -1}
    assert {power: c for power, c in q_part if c} == {1: -1}


@pytest.mark.parametrize(
    "mu, abs_sigma", [(mu, s) for mu in range(4) for s in range(mu + 1)]
)
@pytest.mark.parametrize("x", [1.05, 1.5])
def test_legendre_parts_match_legendre_functions(mu, abs_sigma, x):
    p_part, q_part = legendre_parts(mu, abs_sigma)
    scale = (x * x - 1) ** (abs_sigma / 2)
    p_tilde = math.fsum(float(c) * x**power for power, c in p_part)
    assert p_tilde == pytest.approx(scale * legendre_p(mu, abs_sigma, x), rel=1e-12)
    q_tilde = math.atanh(1 / x) * p_tilde + math.fsum(
        float(c) * x**power for power, c in q_part
    )
    assert q_tilde == pytest.approx(scale * legendre_q(mu, abs_sigma, x), rel=1e-9)


@pytest.mark.parametrize("alpha1, alpha2", [(1.0, 1.0), (0.7, 2.5), (4.0, 1.5)])
def test_mu_zero_reduces_to_classical_form(alpha1, alpha2):
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
    assert a_closed(0, 0, 0, alpha1, alpha2, 0) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("mu", range(4))
@pytest.mark.parametrize("r1, r2", [(0, 0), (1, 0), (0, 2), (2, 1)])
def test_swapping_electrons_is_symmetric(mu, r1, r2):
    for abs_sigma in range(mu + 1):
        assert a_closed(mu, r1, r2, 1.3, 2.9, abs_sigma) == pytest.approx(
            a_closed(mu, r2, r1, 2.9, 1.3, abs_sigma), rel=1e-12
        )


@pytest.mark.parametrize("mu", range(5))
@pytest.mark.parametrize("r1, r2", [(0, 0), (1, 0), (0, 1), (1, 2), (2, 2), (2, 3)])
def test_extra_xi_power_is_minus_alpha_derivative(mu, r1, r2):
    step = 1e-4
    alpha1, alpha2 = 1.5, 2.5
    for abs_sigma in range(mu + 1):
        lower = a_closed(mu, r1, r2, alpha1 - step, alpha2, abs_sigma)
        upper = a_closed(mu, r1, r2, alpha1 + step, alpha2, abs_sigma)
        assert a_closed(mu, r1 + 1, r2, alpha1, alpha2, abs_sigma) == pytest.approx(
            (lower - upper) / (2 * step), rel=1e-6
        )


@pytest.mark.parametrize("alphas", [(0.5, 0.5), (1.0, 3.0), (8.0, 2.0)])
def test_mu_zero_is_positive(alphas):
    assert a_closed(0, 0, 0, *alphas, 0) > 0


def test_magnitude_bounds_value():
    value, magnitude = a_closed_terms(3, 1, 2, 1.2, 0.9, 2)
    assert magnitude >= abs(value) > 0


@pytest.mark.parametrize(
    "args, match",
    [
        ((0, 0, 0, 0.0, 1.0, 0), "alpha"),
        ((0, 0, 0, 1.0, -1.0, 0), "alpha"),
        ((1, 0, 0, 1.0, 1.0, 2), "sigma"),
        ((1, -1, 0, 1.0, 1.0, 0), "r1, r2"),
    ],
)
def test_domain_errors(args, match):
    with pytest.raises(DomainError, match=match):
        a_closed(*args)


def test_derivative_at_high_order_and_sigma_zero():
    step = 1e-4
    lower = a_closed(4, 1, 2, 1.5 - step, 2.5, 0)
    upper = a_closed(4, 1, 2, 1.5 + step, 2.5, 0)
    assert a_closed(4, 2, 2, 1.5, 2.5, 0) == pytest.approx(
        (lower - upper) / (2 * step), rel=1e-7
    )


@pytest.mark.parametrize(
    "args", [(0, 0, 0, 1.0, 2.0, 0), (2, 1, 0, 0.7, 3.0, 1), (4, 3, 3, 10.0, 0.5, 2)]
)
def test_multiprecision_path_agrees_with_floats(args):
    floats = a_closed(*args)
    a_closed_terms.cache_clear()
    with pytest.MonkeyPatch.context() as patch:
        patch.setattr("sto_integrals.core._afunc.FLOAT_LOSS_DIGITS", -1.0)
        value, bound = a_closed_terms(*args)
    a_closed_terms.cache_clear()
    assert bound == abs(value)
    assert value == pytest.approx(floats, rel=1e-11)


@pytest.mark.parametrize(
    "args",
    [
        (4, 3, 3, 0.5, 0.5, 2),
        (4, 3, 3, 10.0, 0.5, 2),
        (3, 2, 1, 5.0, 1.0, 1),
        (4, 0, 3, 2.0, 2.0, 1),
    ],
)
def test_closed_form_matches_wide_evaluation(args):
    mu, r1, r2, alpha1, alpha2, abs_sigma = args
    arith = Arithmetic(60)
    with arith.context():
        wide, _ = AEvaluator(alpha1, alpha2, abs_sigma, arith).terms(mu, r1, r2)
        wide = float(wide)
    assert a_closed(*args) == pytest.approx(wide, rel=1e-12)


def test_underflowing_exponentials_are_redone_in_mpmath():
    value, bound = a_closed_terms(0, 0, 0, 400.0, 400.0, 0)
    assert value == bound == 0.0
    arith = Arithmetic(30)
    with arith.context():
        wide, magnitude = AEvaluator(400.0, 400.0, 0, arith).terms(0, 0, 0)
        assert 0 < wide <= magnitude


def test_evaluator_reuses_moments_across_r():
    evaluator = AEvaluator(1.2, 0.8, 1)
    for r1 in range(3):
        for r2 in range(3):
            value, magnitude = evaluator.terms(3, r1, r2)
            assert value == pytest.approx(a_closed(3, r1, r2, 1.2, 0.8, 1), rel=1e-12)
            assert magnitude >= abs(value)
