import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fwm.exceptions import DomainError
from fwm.units import (
    C,
    omega_to_wavelength,
    pump_midpoint_and_offset,
    wavelength_to_omega,
)

NM = 1e-9


def test_wavelength_to_omega_reference_points():
    assert wavelength_to_omega(1480 * NM) == pytest.approx(1.2728e15, rel=1e-4)
    assert wavelength_to_omega(1620 * NM) == pytest.approx(1.1628e15, rel=1e-4)
    # hand value 2 pi c / lambda
    assert wavelength_to_omega(1550 * NM) == pytest.approx(2 * math.pi * 299792458.0 / 1550e-9, rel=1e-15)


def test_vectorised():
    lam = np.array([700, 800, 900]) * NM
    w = wavelength_to_omega(lam)
    assert w.shape == (3,)
    np.testing.assert_allclose(omega_to_wavelength(w), lam, rtol=1e-15)


@pytest.mark.parametrize("bad", [0.0, -1e-6])
def test_non_positive_rejected(bad):
    with pytest.raises(DomainError):
        wavelength_to_omega(bad)
    with pytest.raises(DomainError):
        omega_to_wavelength(bad)


def test_domain_error_is_value_error():
    with pytest.raises(ValueError):
        wavelength_to_omega(-1.0)


def test_chalcogenide_pump_offset():
    w1, w2 = wavelength_to_omega(1620 * NM), wavelength_to_omega(1480 * NM)
    _, dw = pump_midpoint_and_offset(w1, w2)
    assert dw == pytest.approx(5.50e13, rel=1e-3)


def test_microstructured_midpoint_is_716nm():
    w1, w2 = wavelength_to_omega(760 * NM), wavelength_to_omega(676.75 * NM)
    w0, _ = pump_midpoint_and_offset(w1, w2)
    assert omega_to_wavelength(w0) / NM == pytest.approx(716.0, abs=0.05)


def test_identical_pumps():
    w = wavelength_to_omega(1000 * NM)
    assert pump_midpoint_and_offset(w, w) == (w, 0.0)


@given(st.floats(min_value=100e-9, max_value=20e-6))
def test_round_trip(lam):
    assert omega_to_wavelength(wavelength_to_omega(lam)) == pytest.approx(lam, rel=1e-15)


@given(
    st.floats(min_value=1e14, max_value=1e16),
    st.floats(min_value=1e14, max_value=1e16),
)
def test_midpoint_offset_reconstructs_pumps(a, b):
    w0, dw = pump_midpoint_and_offset(a, b)
    assert dw >= 0
    tol = 1e-15 * max(a, b)
    assert w0 + dw == pytest.approx(max(a, b), abs=4 * tol)
    assert w0 - dw == pytest.approx(min(a, b), abs=4 * tol)


def test_speed_of_light_value():
    assert C == 2.99792458e8
