import pytest

from sto_integrals.core import (
    NonpositiveDistance,
    NonpositiveExponent,
    SlaterOrbital,
    VerificationFailed,
    evaluate,
    make_request,
)
from sto_integrals.oracle import (
    CHECKS,
    CheckResult,
    Grid,
    coulomb_1s_closed,
    coulomb_1s_quadrature,
    exchange_1s_oracle,
    run_checks,
    verify,
)


@pytest.mark.parametrize("zeta, distance", [(1.0, 1.4), (0.8, 3.0), (1.5, 0.5)])
def test_coulomb_closed_form_matches_quadrature(zeta, distance):
    assert coulomb_1s_closed(zeta, distance) == pytest.approx(
        coulomb_1s_quadrature(zeta, distance), rel=1e-8
    )


def test_coulomb_limits():
    # point charges far apart, and the one-center value 5 zeta / 8 at R -> 0
    assert 50 * coulomb_1s_closed(1.0, 50.0) == pytest.approx(1.0, rel=1e-6)
    assert coulomb_1s_closed(2.0, 1e-4) == pytest.approx(5 * 2.0 / 8, rel=1e-3)


@pytest.mark.slow
@pytest.mark.parametrize("zeta1, zeta2, distance", [(1.0, 1.0, 1.4), (1.2, 0.8, 2.0)])
def test_exchange_oracle_matches_engine(zeta1, zeta2, distance):
    first, second = SlaterOrbital(1, 0, 0, zeta1), SlaterOrbital(1, 0, 0, zeta2)
    req = make_request([first, first, second, second], distance)
    assert exchange_1s_oracle(zeta1, zeta2, distance) == pytest.approx(
        evaluate(req).value, rel=1e-7
    )


def test_exchange_oracle_meets_its_default_tolerance():
    value = exchange_1s_oracle(1.0, 1.0, 1.4)
    assert value == pytest.approx(exchange_1s_oracle(1.0, 1.0, 1.4, tol=1e-8), rel=1e-7)
    assert value > 0


@pytest.mark.slow
def test_exchange_decays_with_distance():
    near, far = exchange_1s_oracle(1.0, 1.0, 1.0), exchange_1s_oracle(1.0, 1.0, 4.0)
    assert near > far > 0


@pytest.mark.parametrize(
    "args, error",
    [
        ((0.0, 1.4), NonpositiveExponent),
        ((1.0, 0.0), NonpositiveDistance),
    ],
)
def test_classical_inputs_are_checked(args, error):
    with pytest.raises(error):
        coulomb_1s_closed(*args)
    with pytest.raises(error):
        coulomb_1s_quadrature(*args)


def test_cheap_checks_pass():
    names = ["w_forms", "b_parity", "coefficient_grouping", "scaling"]
    results = run_checks(Grid.SMALL, names)
    assert [r.name for r in results] == names
    assert all(r.passed for r in results), results
    assert all(r.elapsed >= 0 for r in results)


def test_failing_check_is_reported_not_raised(monkeypatch):
    def broken(grid, rng):
        raise AssertionError("off by one")

    monkeypatch.setitem(CHECKS, "w_forms", broken)
    [result] = run_checks("small", ["w_forms"])
    assert isinstance(result, CheckResult)
    assert (result.name, result.passed) == ("w_forms", False)
    assert result.detail == "AssertionError: off by one"


def test_verify_names_every_failing_check(monkeypatch):
    def broken(grid, rng):
        raise ArithmeticError("overflow")

    def fine(grid, rng):
        pass

    monkeypatch.setattr(
        "sto_integrals.oracle._suite.CHECKS",
        {"first": broken, "second": fine, "third": broken},
    )
    with pytest.raises(VerificationFailed) as exc_info:
        verify()
    assert set(exc_info.value.errors) == {"first", "third"}
    assert "ArithmeticError: overflow" in str(exc_info.value)


def test_verify_passes_when_every_check_does(monkeypatch):
    monkeypatch.setattr("sto_integrals.oracle._suite.CHECKS", {"ok": lambda g, r: None})
    verify(Grid.FULL)
