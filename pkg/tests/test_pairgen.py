import csv
import io
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fwm.dispersion import EvenTaylorDispersion
from fwm.exceptions import ConfigurationError, ResolutionError
from fwm.fiber import FiberSpec
from fwm.pairgen import (
    GainValidityWarning,
    PumpConfig,
    SpectralGrid,
    bandwidth_integral,
    conversion_efficiency,
    low_gain_correction,
    main_lobe_intervals,
    pairs_per_pulse,
    pairs_per_second,
    spectral_density,
    spectrum,
)
from fwm.phasematch import required_pump_power
from fwm.pairgen import mismatch_context
from fwm.units import omega_to_wavelength

HBAR = 1.054571817e-34
NM = 1e-9


def test_chalc_density_at_zero_mismatch(chalc):
    ctx = mismatch_context(chalc.fiber, chalc.pump)
    p1 = required_pump_power(ctx)
    pump = chalc.pump.replace(p1_avg=p1 * chalc.pump.f_rep * chalc.pump.pulse_duration)
    w2 = pump.omega_p2
    expect = 4 * 180**2 * p1 * (HBAR * w2 / (2 * math.pi)) * 0.1**2
    got = spectral_density(chalc.fiber, pump, 0.0)
    assert got == pytest.approx(expect, rel=1e-9)
    assert got == pytest.approx(2.33e-17, rel=1e-2)


def test_density_vanishes_without_strong_pump(chalc):
    pump = chalc.pump.replace(p1_avg=0.0)
    assert spectral_density(chalc.fiber, pump, 1e13) == 0.0
    s = spectrum(chalc.fiber, pump, SpectralGrid.for_pump(pump))
    assert not s.density.any()


def test_density_null_at_first_zero(chalc):
    ctx = mismatch_context(chalc.fiber, chalc.pump)
    # K(O) = b2 (O^2 - dw^2) + gamma P1; pick O with K L / 2 = pi
    k_target = 2 * math.pi / 0.1
    b2 = 0.05e-24
    o = math.sqrt(ctx.delta_omega**2 + (k_target - ctx.spm_term) / b2)
    peak = spectral_density(chalc.fiber, chalc.pump, 0.0)
    assert spectral_density(chalc.fiber, chalc.pump, o) < 1e-12 * max(peak, 1e-30) + 1e-40


def _flat_fiber(w0):
    return FiberSpec(1.0, 0.1, EvenTaylorDispersion(w0, 0.0, 0.0))


def test_bandwidth_of_flat_mismatch_is_half_window(chalc):
    pump = chalc.pump.replace(p1_avg=0.0)
    grid = SpectralGrid.for_pump(pump)
    bw = grid.bin_width
    # passband covering bins -10..10, clear of the pump bins, edges between nodes
    band = (grid.omega_center - 10.5 * bw, grid.omega_center + 10.5 * bw)
    got = bandwidth_integral(_flat_fiber(pump.omega_0), pump, grid.replace(filter_band=band))
    assert got == pytest.approx(0.5 * 21 * bw, rel=1e-12)


def test_pm_bandwidth_near_7_rad_thz(pm):
    dws = bandwidth_integral(pm.fiber, pm.pump, pm.grid)
    assert 3.5e12 <= dws <= 10.5e12


@pytest.mark.parametrize("name", ["chalc", "micro", "pm"])
def test_bin_halving_stable(name, request):
    sc = request.getfixturevalue(name)
    a = bandwidth_integral(sc.fiber, sc.pump, sc.grid)
    fine = SpectralGrid.for_pump(
        sc.pump, bin_width=sc.grid.bin_width / 2, filter_band=sc.grid.filter_band
    )
    b = bandwidth_integral(sc.fiber, sc.pump, fine)
    assert b == pytest.approx(a, rel=5e-3)


def test_explicit_coarse_oversample_rejected(pm):
    with pytest.raises(ResolutionError):
        bandwidth_integral(pm.fiber, pm.pump, pm.grid.replace(oversample=1))


def test_pairs_per_pulse_examples(chalc):
    n = pairs_per_pulse(chalc.fiber, chalc.pump, chalc.grid)
    assert 1.1e-3 / 2 <= n <= 1.1e-3 * 2
    assert pairs_per_pulse(chalc.fiber, chalc.pump.replace(p1_avg=0.0), chalc.grid) == 0.0
    assert pairs_per_second(chalc.fiber, chalc.pump, chalc.grid) == pytest.approx(8e7 * n, rel=1e-15)


def test_pairs_per_pulse_needs_pulsed_regime(chalc):
    with pytest.raises(ConfigurationError):
        pairs_per_pulse(chalc.fiber, chalc.pump.replace(regime="pulsed_cw"), chalc.grid)


def test_length_scaling_fixed_bandwidth(chalc):
    long = FiberSpec(chalc.fiber.gamma, 0.2, chalc.fiber.dispersion)
    a = pairs_per_pulse(chalc.fiber, chalc.pump, chalc.grid, bandwidth=1e13)
    b = pairs_per_pulse(long, chalc.pump, chalc.grid, bandwidth=1e13)
    assert b == pytest.approx(4 * a, rel=1e-14)


def test_length_scaling_linear_mismatch(pm):
    # near a simple root Dw_s ~ 1/L, so N ~ L
    long = FiberSpec(pm.fiber.gamma, 2 * pm.fiber.length, pm.fiber.dispersion)
    a = pairs_per_pulse(pm.fiber, pm.pump, pm.grid)
    b = pairs_per_pulse(long, pm.pump, pm.grid)
    assert b / a == pytest.approx(2.0, rel=0.10)


def test_rate_bands(chalc, pm):
    assert 8.8e4 / 2 <= pairs_per_second(chalc.fiber, chalc.pump, chalc.grid) <= 8.8e4 * 2
    assert 1.6 / 10 <= pairs_per_second(pm.fiber, pm.pump, pm.grid) <= 1.6 * 10


def test_regime_ratio_pulsed_cw(chalc):
    pp = chalc.pump
    pc = pp.replace(regime="pulsed_cw")
    dws = 2e13
    r = pairs_per_second(chalc.fiber, pc, chalc.grid, bandwidth=dws) / pairs_per_second(
        chalc.fiber, pp, chalc.grid, bandwidth=dws
    )
    assert r == pytest.approx(pp.f_rep * pp.pulse_duration, rel=1e-12)


def test_equivalent_single_photon_equals_cw(chalc):
    esp = chalc.pump.replace(regime="equivalent_single_photon", p2_avg=1e-12)
    cw = PumpConfig(
        esp.lambda_p1, esp.lambda_p2, "cw_cw", esp.p1_avg, esp.pulse_duration, p2_avg=1e-12
    )
    a = pairs_per_second(chalc.fiber, esp, chalc.grid, bandwidth=2e13)
    b = pairs_per_second(chalc.fiber, cw, chalc.grid, bandwidth=2e13)
    assert a == pytest.approx(b, rel=1e-12)


def test_efficiency_bands(chalc, micro, pm):
    assert 1.1e-3 / 2 <= conversion_efficiency(chalc.fiber, chalc.pump, chalc.grid).eta <= 1.1e-3 * 2
    assert 4e-4 / 3 <= conversion_efficiency(micro.fiber, micro.pump, micro.grid).eta <= 4e-4 * 3
    assert 2e-8 / 10 <= conversion_efficiency(pm.fiber, pm.pump, pm.grid).eta <= 2e-8 * 10


def test_efficiency_report_consistency(chalc):
    rep = conversion_efficiency(chalc.fiber, chalc.pump, chalc.grid)
    assert rep.eta == pytest.approx(rep.pairs_per_pulse, rel=1e-15)
    assert rep.pairs_per_second == pytest.approx(chalc.pump.f_rep * rep.eta, rel=1e-15)
    assert rep.eta_corrected == pytest.approx(rep.eta - 2 * rep.eta**2 + rep.eta**3, rel=1e-15)
    assert rep.gain_parameter < 0.1
    assert rep.p1_peak == pytest.approx(0.8, rel=1e-12)


def test_gain_warning(chalc):
    strong = FiberSpec(1e6, 0.1, chalc.fiber.dispersion)
    pump = chalc.pump.replace(photons_per_pulse_p2=1e6)
    rep = conversion_efficiency(strong, pump, chalc.grid)
    assert any("gain parameter" in w for w in rep.warnings)


def test_filter_clipping_warning(micro):
    narrow = micro.grid.replace(filter_band=(micro.pump.omega_0 - 1e13, micro.pump.omega_0 + 1e13))
    rep = conversion_efficiency(micro.fiber, micro.pump, narrow)
    assert any("clips" in w for w in rep.warnings)
    full = conversion_efficiency(micro.fiber, micro.pump, micro.grid)
    assert not any("clips" in w for w in full.warnings)


def test_low_gain_correction_values():
    c, b = low_gain_correction(0.1)
    assert c == pytest.approx(0.081, rel=1e-12)
    assert b == pytest.approx(0.02, rel=1e-12)
    assert low_gain_correction(1e-3).error_bound == pytest.approx(2e-6, rel=1e-12)
    assert tuple(low_gain_correction(0.0)) == (0.0, 0.0)
    with pytest.warns(GainValidityWarning):
        low_gain_correction(0.4)
    with pytest.raises(ValueError):
        low_gain_correction(-0.1)


@given(st.floats(min_value=0.0, max_value=0.3))
def test_low_gain_correction_bounds(eta):
    c, b = low_gain_correction(eta)
    assert c <= eta
    assert eta - c <= b + 4e-16 * eta


def test_pm_spectrum_has_two_lobes(pm):
    lobes = main_lobe_intervals(pm.fiber, pm.pump, pm.grid)
    centres = sorted(omega_to_wavelength(0.5 * (a + b)) / NM for a, b in lobes)
    assert len(centres) == 2
    assert centres[0] == pytest.approx(728, abs=3)
    assert centres[1] == pytest.approx(790, abs=3)
    # K is linear across each lobe, so FWHM = (2 x_half / 2 pi) * null-to-null width
    x_half = 1.3915573843
    for a, b in lobes:
        fwhm = (b - a) * x_half / math.pi
        assert 7e12 / 2 <= fwhm <= 7e12 * 2


def test_micro_main_lobe_width(micro):
    lobes = main_lobe_intervals(micro.fiber, micro.pump, micro.grid)
    widest = max(b - a for a, b in lobes)
    assert 160e12 / 2 <= widest <= 160e12 * 2


def test_spectrum_symmetry_and_pump_bins(chalc, micro, pm):
    for sc in (chalc, micro, pm):
        s = spectrum(sc.fiber, sc.pump, sc.grid)
        d = s.density
        peak = d.max()
        assert np.max(np.abs(d - d[::-1])) <= 1e-9 * peak
        assert not d[s.is_pump].any()
        assert s.is_pump.sum() == 2


def test_density_partitioning_is_elementwise(chalc):
    o = np.linspace(-1e14, 1e14, 101)
    full = spectral_density(chalc.fiber, chalc.pump, o)
    parts = np.concatenate([spectral_density(chalc.fiber, chalc.pump, o[:37]),
                            spectral_density(chalc.fiber, chalc.pump, o[37:])])
    assert np.array_equal(full, parts)


def test_spectrum_csv(pm):
    s = spectrum(pm.fiber, pm.pump, pm.grid)
    text = s.to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["lambda_nm", "omega_rad_per_s", "spectral_density", "is_pump_bin"]
    assert len(rows) == 1 + s.omega.size
    assert float(rows[1][1]) == s.omega[0]


def test_pump_validation(chalc):
    p = chalc.pump
    with pytest.raises(ConfigurationError):
        p.replace(lambda_p1=p.lambda_p2 * 0.9)
    with pytest.raises(ConfigurationError):
        p.replace(regime="nonsense")
    with pytest.raises(ConfigurationError):
        p.replace(f_rep=None)
    with pytest.raises(ConfigurationError):
        p.replace(pulse_duration=1e-7)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1e-3), st.floats(min_value=1.1, max_value=4.0))
def test_eta_linear_in_p1_at_fixed_bandwidth(p1_avg, k):
    from fwm import load_preset

    sc = load_preset("chalc-microwire")
    a = pairs_per_pulse(sc.fiber, sc.pump.replace(p1_avg=p1_avg), sc.grid, bandwidth=1e13)
    b = pairs_per_pulse(sc.fiber, sc.pump.replace(p1_avg=k * p1_avg), sc.grid, bandwidth=1e13)
    assert b == pytest.approx(k * a, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=1.0, max_value=500.0), st.floats(min_value=1.1, max_value=4.0))
def test_eta_quadratic_in_gamma_at_fixed_bandwidth(g, k):
    from fwm import load_preset

    sc = load_preset("chalc-microwire")
    fa = FiberSpec(g, 0.1, sc.fiber.dispersion)
    fb = FiberSpec(k * g, 0.1, sc.fiber.dispersion)
    a = pairs_per_pulse(fa, sc.pump, sc.grid, bandwidth=1e13)
    b = pairs_per_pulse(fb, sc.pump, sc.grid, bandwidth=1e13)
    assert b == pytest.approx(k * k * a, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=1e5, max_value=1e9))
def test_rate_is_frep_times_per_pulse(f_rep):
    from fwm import load_preset

    sc = load_preset("chalc-microwire")
    pump = sc.pump.replace(f_rep=f_rep)
    n = pairs_per_pulse(sc.fiber, pump, sc.grid, bandwidth=1e13)
    assert pairs_per_second(sc.fiber, pump, sc.grid, bandwidth=1e13) == pytest.approx(f_rep * n, rel=1e-15)


def test_efficiency_emits_no_python_warnings(chalc):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        conversion_efficiency(chalc.fiber, chalc.pump, chalc.grid)
