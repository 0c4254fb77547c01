import math

import numpy as np
import pytest

from trunclap.nonlinearities import (
    NonlinearityError,
    allen_cahn,
    check_nonlinearity,
    power_law,
)


def test_allen_cahn_values():
    nl = allen_cahn()
    assert nl.f(0.0) == 0.0
    assert nl.f(0.5) == pytest.approx(0.375, abs=1e-15)
    assert nl.fprime(0.0) == 1.0
    assert nl.delta == pytest.approx(1.0 / math.sqrt(3.0), abs=1e-15)


def test_power_law_matches_allen_cahn_pointwise():
    cubic = power_law(1.0, -1.0, 3.0)
    ac = allen_cahn()
    u = np.linspace(-0.9, 0.9, 501)
    assert np.max(np.abs(cubic.f(u) - ac.f(u))) <= 1e-14
    assert np.max(np.abs(cubic.fprime(u) - ac.fprime(u))) <= 1e-14
    assert cubic.delta == pytest.approx(ac.delta, abs=1e-6)


def test_power_law_linear_case_has_full_window():
    nl = power_law(1.0, 0.0, 2.0)
    assert nl.delta == 1.0
    assert nl.f(0.25) == 0.25


def test_power_law_example_value():
    nl = power_law(2.0, 1.0, 2.0)
    assert nl.f(0.1) == pytest.approx(0.21, abs=1e-15)
    assert nl.delta == 1.0  # b > 0 keeps the derivative positive everywhere


def test_power_law_rejects_bad_parameters():
    with pytest.raises(NonlinearityError):
        power_law(0.0, 1.0, 2.0)
    with pytest.raises(NonlinearityError):
        power_law(-1.0, 1.0, 2.0)
    with pytest.raises(NonlinearityError):
        power_law(1.0, 1.0, 1.0)


@pytest.mark.parametrize(
    "nl",
    [allen_cahn(), power_law(1.0, -1.0, 3.0), power_law(1.0, 0.0, 2.0), power_law(2.0, 1.0, 2.0)],
    ids=lambda nl: nl.name,
)
def test_contract_holds_on_catalog(nl):
    assert check_nonlinearity(nl) == []


def test_contract_checker_spots_broken_derivative():
    from trunclap.nonlinearities import Nonlinearity

    broken = Nonlinearity("broken", lambda u: u - u**3, lambda u: np.ones_like(np.asarray(u, dtype=float)), 0.5)
    assert any("mismatch" in p for p in check_nonlinearity(broken))
