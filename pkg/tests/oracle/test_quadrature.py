import itertools

import pytest

from sto_integrals.core import DomainError, a_closed
from sto_integrals.oracle import a_quadrature

A_CASES = [
    (mu, r1, r2, abs_sigma, alphas)
    for mu in range(5)
    for abs_sigma in range(min(mu, 2) + 1)
    for r1, r2 in [(0, 0), (1, 0), (0, 3), (2, 1), (3, 3)]
    for alphas in [(0.5, 0.5), (10.0, 0.5), (2.0, 2.0)]
]


@pytest.mark.slow
@pytest.mark.parametrize("mu, r1, r2, abs_sigma, alphas", A_CASES)
def test_quadrature_matches_closed_form(mu, r1, r2, abs_sigma, alphas):
    assert a_quadrature(mu, r1, r2, *alphas, abs_sigma, tol=1e-9) == pytest.approx(
        a_closed(mu, r1, r2, *alphas, abs_sigma), rel=1e-8, abs=1e-12
    )


@pytest.mark.parametrize("r1, r2", list(itertools.product(range(2), repeat=2)))
def test_quadrature_is_symmetric_under_electron_swap(r1, r2):
    assert a_quadrature(1, r1, r2, 1.5, 2.5, 1) == pytest.approx(
        a_quadrature(1, r2, r1, 2.5, 1.5, 1), rel=1e-8
    )


@pytest.mark.parametrize(
    "args, error, match",
    [
        ((0, 0, 0, 0.0, 1.0, 0), DomainError, "alpha"),
        ((1, 0, 0, 1.0, 1.0, 2), DomainError, "sigma"),
        ((1, 0, -1, 1.0, 1.0, 0), DomainError, "r must"),
    ],
)
def test_quadrature_domain(args, error, match):
    with pytest.raises(error, match=match):
        a_quadrature(*args)


def test_quadrature_needs_a_positive_tolerance():
    with pytest.raises(ValueError, match="tol"):
        a_quadrature(0, 0, 0, 1.0, 1.0, 0, tol=0.0)


@pytest.mark.slow
@pytest.mark.parametrize(
    "args", [(4, 3, 3, 0.5, 0.5, 2), (4, 3, 3, 10.0, 0.5, 2), (3, 1, 2, 5.0, 1.0, 1)]
)
def test_quadrature_matches_closed_form_at_high_order(args):
    assert a_quadrature(*args, tol=1e-10) == pytest.approx(
        a_closed(*args), rel=1e-8, abs=1e-12
    )


@pytest.mark.parametrize("args", [(0, 0, 0, 1.0, 2.0, 0), (0, 2, 2, 1.4, 1.4, 0)])
def test_quadrature_meets_its_default_tolerance(args):
    assert a_quadrature(*args) == pytest.approx(a_closed(*args), rel=1e-8)
