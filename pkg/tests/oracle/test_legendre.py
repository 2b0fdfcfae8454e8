import math

import pytest

from sto_integrals.core import DomainError
from sto_integrals.oracle import legendre_p, legendre_q
from sto_integrals.oracle._legendre import (
    RECURRENCE_LIMIT,
    _q_hypergeometric,
    _q_recurrence,
)

POINTS = [1.05, 2.0, 10.0]


@pytest.mark.parametrize("x", POINTS)
def test_first_kind_closed_forms(x):
    root = math.sqrt(x * x - 1)
    assert legendre_p(2, 0, x) == pytest.approx((3 * x * x - 1) / 2, rel=1e-14)
    assert legendre_p(2, 1, x) == pytest.approx(3 * x * root, rel=1e-14)
    assert legendre_p(2, 2, x) == pytest.approx(3 * (x * x - 1), rel=1e-13)
    assert legendre_p(3, 3, x) == pytest.approx(15 * root**3, rel=1e-13)


@pytest.mark.parametrize("x", POINTS)
def test_second_kind_closed_forms(x):
    root = math.sqrt(x * x - 1)
    q0 = math.atanh(1 / x)
    assert legendre_q(0, 0, x) == pytest.approx(q0, rel=1e-12)
    assert legendre_q(1, 0, x) == pytest.approx(x * q0 - 1, rel=1e-11)
    assert legendre_q(1, 1, x) == pytest.approx(
        root * (q0 - x / (x * x - 1)), rel=1e-11
    )


@pytest.mark.parametrize("mu", range(1, 7))
@pytest.mark.parametrize("x", POINTS)
def test_wronskian(mu, x):
    cross = legendre_p(mu, 0, x) * legendre_q(mu - 1, 0, x) - legendre_p(
        mu - 1, 0, x
    ) * legendre_q(mu, 0, x)
    assert cross == pytest.approx(1 / mu, rel=1e-9)


@pytest.mark.parametrize(
    "mu, abs_sigma", [(m, s) for m in range(6) for s in range(m + 1)]
)
def test_both_second_kind_paths_agree_at_the_switch(mu, abs_sigma):
    assert _q_recurrence(mu, abs_sigma, RECURRENCE_LIMIT) == pytest.approx(
        _q_hypergeometric(mu, abs_sigma, RECURRENCE_LIMIT), rel=1e-9
    )


def test_second_kind_decays_like_a_power():
    # Q_mu(x) ~ mu! / (2mu+1)!! x^-(mu+1)
    x = 1e3
    assert legendre_q(3, 0, x) == pytest.approx(6 / 105 / x**4, rel=1e-5)


@pytest.mark.parametrize(
    "args, match",
    [((0, 0, 1.0), "x > 1"), ((1, 0, -2.0), "x > 1"), ((1, 2, 2.0), "order 2")],
)
def test_domain(args, match):
    with pytest.raises(DomainError, match=match):
        legendre_p(*args)
    with pytest.raises(DomainError, match=match):
        legendre_q(*args)
