"""Pair spectra, phasematching bandwidth, rates and conversion efficiency.

All rate formulas share the low-gain spectral density

    n_d(w) = 4 gamma^2 P1 (T P2 / 2 pi) L^2 sinc^2(K L / 2)

(photons per rad/s per characteristic time ``T``) and the bandwidth

    dw_s = 1/2 * integral sinc^2(K L / 2) dw

taken over every frequency bin except the two pump bins. The factor 1/2
removes the signal/idler double count.
"""
import csv
import io
import math
import warnings
from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError, DomainError, ResolutionError, ValidationError
from .phasematch import MismatchContext, total_mismatch
from .units import HBAR, omega_to_wavelength, pump_midpoint_and_offset, wavelength_to_omega

REGIMES = ("pulsed_pulsed", "pulsed_cw", "equivalent_single_photon", "cw_cw")
PULSED_STRONG = ("pulsed_pulsed", "equivalent_single_photon")
PULSED_WEAK = ("pulsed_pulsed", "pulsed_cw")

GAIN_WARNING_THRESHOLD = 0.1
MAX_PERTURBATIVE_ETA = 0.3
NODES_PER_MAIN_LOBE = 16
MAX_OVERSAMPLE = 1024
CLIP_TOLERANCE = 0.01


class GainValidityWarning(UserWarning):
    """First-order (low-gain) result is outside its comfortable range."""


@dataclass(frozen=True)
class PumpConfig:
    """Two-pump configuration.

    ``lambda_p1`` is the strong pump and must be the longer wavelength.
    ``pulse_duration`` fixes the characteristic time ``T`` and therefore the
    frequency bin ``2 pi / T``. ``p2_avg`` is only read by the CW-weak-pump
    regimes; it defaults to one photon per ``T``.
    """

    lambda_p1: float
    lambda_p2: float
    regime: str
    p1_avg: float
    pulse_duration: float
    f_rep: float = None
    photons_per_pulse_p2: float = 1.0
    p2_avg: float = None

    def __post_init__(self):
        if not (self.lambda_p1 > 0 and self.lambda_p2 > 0):
            raise ConfigurationError("pump wavelengths must be positive")
        if not self.lambda_p1 > self.lambda_p2:
            raise ConfigurationError(
                "strong pump (p1) must be at the longer wavelength: "
                f"lambda_p1={self.lambda_p1:.6g} m <= lambda_p2={self.lambda_p2:.6g} m"
            )
        if self.regime not in REGIMES:
            raise ConfigurationError(f"regime must be one of {REGIMES}, got {self.regime!r}")
        if not self.p1_avg >= 0:
            raise ConfigurationError(f"p1_avg must be >= 0, got {self.p1_avg}")
        if not self.pulse_duration > 0:
            raise ConfigurationError("pulse_duration must be positive")
        if self.regime != "cw_cw":
            if self.f_rep is None or not self.f_rep > 0:
                raise ConfigurationError(f"regime {self.regime} needs a positive f_rep")
            if not self.pulse_duration * self.f_rep < 1:
                raise ConfigurationError("pulse_duration * f_rep must be < 1 for pulsed pumps")
        if not self.photons_per_pulse_p2 > 0:
            raise ConfigurationError("photons_per_pulse_p2 must be positive")
        if self.p2_avg is not None and not self.p2_avg >= 0:
            raise ConfigurationError("p2_avg must be >= 0")

    @property
    def omega_p1(self):
        return wavelength_to_omega(self.lambda_p1)

    @property
    def omega_p2(self):
        return wavelength_to_omega(self.lambda_p2)

    @property
    def omega_0(self):
        return pump_midpoint_and_offset(self.omega_p1, self.omega_p2)[0]

    @property
    def delta_omega(self):
        return pump_midpoint_and_offset(self.omega_p1, self.omega_p2)[1]

    @property
    def pump_bandwidth(self):
        """delta omega_p = 2 pi / T."""
        return 2.0 * math.pi / self.pulse_duration

    @property
    def p1_peak(self):
        if self.regime in PULSED_STRONG:
            return self.p1_avg / (self.f_rep * self.pulse_duration)
        return self.p1_avg

    @property
    def p2_peak(self):
        """Weak-pump peak power for ``photons_per_pulse_p2`` photons in ``T``."""
        return self.photons_per_pulse_p2 * HBAR * self.omega_p2 / self.pulse_duration

    @property
    def zeta2(self):
        return 2.0 * math.pi * HBAR * self.omega_p2 / self.pulse_duration**2

    @property
    def p2_average(self):
        """Weak-pump average power used by the CW-weak-pump regimes."""
        if self.p2_avg is not None:
            return self.p2_avg
        return self.p2_peak

    def replace(self, **changes):
        values = {f: getattr(self, f) for f in self.__dataclass_fields__}
        values.update(changes)
        return PumpConfig(**values)


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform frequency bins centred on the pump midpoint.

    Bin ``k`` is centred on ``omega_center + k * bin_width`` for
    ``k = -half_bins .. half_bins``, so the grid is mirror-symmetric about
    the midpoint. The bins containing the two pumps are always excluded
    from integrals.

    ``oversample`` subdivides every bin into that many midpoint nodes for
    quadrature only; ``None`` picks the smallest power of two that puts at
    least 16 nodes across the narrowest sinc^2 main lobe.
    """

    omega_center: float
    bin_width: float
    half_bins: int
    pump_offset: float
    filter_band: tuple = None
    oversample: int = None

    def __post_init__(self):
        if not self.bin_width > 0:
            raise ConfigurationError("bin_width must be positive")
        if self.half_bins < 1:
            raise ConfigurationError("grid needs at least one bin each side of the centre")
        if self.filter_band is not None:
            lo, hi = self.filter_band
            if not lo < hi:
                raise ConfigurationError("filter band must satisfy lo < hi")
        if self.oversample is not None and (int(self.oversample) != self.oversample or self.oversample < 1):
            raise ConfigurationError("oversample must be a positive integer")

    @classmethod
    def for_pump(cls, pump, bin_width=None, span=2.0, filter_band=None, oversample=None):
        """Grid covering ``omega_0 +/- span * delta_omega`` in bins of ``2 pi / T``.

        ``filter_band`` is an ``(omega_lo, omega_hi)`` passband in rad/s.
        """
        bw = pump.pump_bandwidth if bin_width is None else float(bin_width)
        if not bw > 0:
            raise ConfigurationError("bin_width must be positive")
        if not span > 1:
            raise ConfigurationError("span must exceed 1 so both pumps lie on the grid")
        dw = pump.delta_omega
        half = max(int(math.ceil(span * dw / bw)), 1)
        return cls(pump.omega_0, bw, half, dw, filter_band, oversample)

    def replace(self, **changes):
        values = {f: getattr(self, f) for f in self.__dataclass_fields__}
        values.update(changes)
        return SpectralGrid(**values)

    @property
    def indices(self):
        return np.arange(-self.half_bins, self.half_bins + 1)

    @property
    def centers(self):
        return self.omega_center + self.indices * self.bin_width

    @property
    def omega_min(self):
        return self.omega_center - (self.half_bins + 0.5) * self.bin_width

    @property
    def omega_max(self):
        return self.omega_center + (self.half_bins + 0.5) * self.bin_width

    @property
    def excluded_bins(self):
        k = int(round(self.pump_offset / self.bin_width))
        return (-k, k)

    @property
    def pump_mask(self):
        return np.isin(self.indices, self.excluded_bins)

    def nodes(self, oversample):
        """Quadrature offsets from ``omega_center`` and their bin's pump flag."""
        s = int(oversample)
        sub = ((np.arange(s) + 0.5) / s - 0.5) * self.bin_width
        offsets = (self.indices[:, None] * self.bin_width + sub[None, :]).ravel()
        pump = np.repeat(self.pump_mask, s)
        return offsets, pump


@dataclass(frozen=True)
class Spectrum:
    grid: SpectralGrid
    omega: np.ndarray
    density: np.ndarray
    is_pump: np.ndarray

    @property
    def wavelength(self):
        return omega_to_wavelength(self.omega)

    def to_csv(self, path=None):
        """Write ``lambda_nm,omega_rad_per_s,spectral_density,is_pump_bin``.

        Returns the text when ``path`` is None.
        """
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["lambda_nm", "omega_rad_per_s", "spectral_density", "is_pump_bin"])
        for lam, w, d, p in zip(self.wavelength * 1e9, self.omega, self.density, self.is_pump):
            writer.writerow([repr(float(lam)), repr(float(w)), repr(float(d)), int(bool(p))])
        text = buf.getvalue()
        if path is None:
            return text
        with open(path, "w", newline="") as fh:
            fh.write(text)
        return text


@dataclass(frozen=True)
class EfficiencyReport:
    regime: str
    eta: float
    eta_corrected: float
    error_bound: float
    pairs_per_pulse: float
    pairs_per_second: float
    bandwidth: float
    p1_peak: float
    gain_parameter: float
    warnings: tuple = field(default_factory=tuple)


LowGainCorrection = namedtuple("LowGainCorrection", ["eta_corrected", "error_bound"])


def sinc(x):
    """sin(x)/x with an explicit series branch near zero."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-8
    safe = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)
    return float(out) if out.ndim == 0 else out


def mismatch_context(fiber, pump):
    """Phase-mismatch context using the SPM power present in ``pump.regime``."""
    return MismatchContext.from_fiber(fiber, pump.omega_p1, pump.omega_p2, pump.p1_peak)


def density_prefactor(fiber, pump):
    """4 gamma^2 P1 (T P2 / 2 pi) L^2 -- photons per rad/s per T at K = 0."""
    L = fiber.effective_length
    return (
        4.0 * fiber.gamma**2 * pump.p1_peak
        * pump.photons_per_pulse_p2 * HBAR * pump.omega_p2 / (2.0 * math.pi)
        * L * L
    )


def spectral_density(fiber, pump, omega_offset, ctx=None):
    """Generated-photon spectral density at offset(s) from the pump midpoint."""
    ctx = mismatch_context(fiber, pump) if ctx is None else ctx
    K = total_mismatch(ctx, omega_offset)
    s = sinc(0.5 * K * fiber.effective_length)
    return density_prefactor(fiber, pump) * s * s


def _runs(mask):
    """Lengths of contiguous True runs."""
    if not mask.any():
        return np.array([], dtype=int)
    padded = np.concatenate(([False], mask, [False])).astype(np.int8)
    edges = np.flatnonzero(np.diff(padded))
    return edges[1::2] - edges[::2]


def _min_lobe_nodes(ctx, grid, L, oversample):
    offsets, _ = grid.nodes(oversample)
    K = total_mismatch(ctx, offsets)
    runs = _runs(np.abs(0.5 * K * L) < math.pi)
    return (int(runs.min()) if runs.size else None), offsets, K


def _resolve_nodes(ctx, grid, L):
    if grid.oversample is not None:
        n, offsets, K = _min_lobe_nodes(ctx, grid, L, grid.oversample)
        if n is not None and n < NODES_PER_MAIN_LOBE:
            raise ResolutionError(
                f"quadrature step {grid.bin_width / grid.oversample:.3e} rad/s resolves the "
                f"narrowest main lobe with {n} nodes (< {NODES_PER_MAIN_LOBE}); "
                "reduce bin_width or raise oversample"
            )
        return grid.oversample, offsets, K
    s = 1
    while True:
        n, offsets, K = _min_lobe_nodes(ctx, grid, L, s)
        if n is None or n >= NODES_PER_MAIN_LOBE:
            return s, offsets, K
        if s >= MAX_OVERSAMPLE:
            raise ResolutionError(
                f"main lobe unresolved even with {s} nodes per bin; reduce bin_width"
            )
        s *= 2


def _bandwidth(ctx, grid, L, use_filter=True):
    s, offsets, K = _resolve_nodes(ctx, grid, L)
    _, pump = grid.nodes(s)
    keep = ~pump
    if use_filter and grid.filter_band is not None:
        lo, hi = grid.filter_band
        w = grid.omega_center + offsets
        keep &= (w >= lo) & (w <= hi)
    v = sinc(0.5 * K[keep] * L)
    # fsum: exactly rounded, so independent of evaluation order or partitioning
    return 0.5 * math.fsum(v * v) * (grid.bin_width / s)


def bandwidth_integral(fiber, pump, grid, ctx=None):
    """Phasematching bandwidth dw_s in rad/s (midpoint rule, pump bins removed)."""
    ctx = mismatch_context(fiber, pump) if ctx is None else ctx
    return _bandwidth(ctx, grid, fiber.effective_length)


def pairs_per_pulse(fiber, pump, grid, bandwidth=None):
    """Pairs generated per pulse with both pumps pulsed.

    ``bandwidth`` overrides the computed dw_s (useful to compare regimes at
    a fixed phasematching context).
    """
    if pump.regime != "pulsed_pulsed":
        raise ConfigurationError(
            f"pairs_per_pulse needs regime 'pulsed_pulsed', got {pump.regime!r}"
        )
    dws = bandwidth_integral(fiber, pump, grid) if bandwidth is None else bandwidth
    return density_prefactor(fiber, pump) * dws


def pairs_per_second(fiber, pump, grid, bandwidth=None):
    """Pair rate for the configured pumping regime.

    * pulsed_pulsed: ``f_rep * N_pairs/pulse``
    * pulsed_cw (weak pulsed, strong CW):
      ``f_rep * 4 g^2 P1avg P2 L^2 dw_s / dw_p``, ``P2 = n hbar w2 / T``
    * equivalent_single_photon and cw_cw:
      ``4 g^2 P1avg P2avg L^2 dw_s / 2 pi``
    """
    dws = bandwidth_integral(fiber, pump, grid) if bandwidth is None else bandwidth
    if pump.regime == "pulsed_pulsed":
        return pump.f_rep * pairs_per_pulse(fiber, pump, grid, bandwidth=dws)
    L = fiber.effective_length
    core = 4.0 * fiber.gamma**2 * pump.p1_avg * L * L * dws
    if pump.regime == "pulsed_cw":
        return pump.f_rep * core * pump.p2_peak / pump.pump_bandwidth
    return core * pump.p2_average / (2.0 * math.pi)


def low_gain_correction(eta):
    """Third-order corrected efficiency and first-order error bound.

    Returns ``(eta - 2 eta^2 + eta^3, 2 eta^2)``. Above ``eta = 0.3`` the
    series is only indicative and a :class:`GainValidityWarning` is issued.
    """
    if not eta >= 0:
        raise DomainError(f"eta must be >= 0, got {eta}")
    if eta > MAX_PERTURBATIVE_ETA:
        warnings.warn(
            f"eta={eta:.3g} > {MAX_PERTURBATIVE_ETA}: perturbative correction is advisory only",
            GainValidityWarning,
            stacklevel=2,
        )
    return LowGainCorrection(eta - 2.0 * eta**2 + eta**3, 2.0 * eta**2)


def gain_parameter(fiber, pump):
    """gamma sqrt(T zeta2) sqrt(P1) L; must be << 1 for the low-gain result."""
    return (
        fiber.gamma
        * math.sqrt(pump.pulse_duration * pump.zeta2 * pump.photons_per_pulse_p2)
        * math.sqrt(pump.p1_peak)
        * fiber.effective_length
    )


def conversion_efficiency(fiber, pump, grid):
    """Efficiency report for one fiber/pump/grid combination.

    ``eta`` is generated pairs per injected weak-pump photon. For pulsed
    weak pumps it is ``pairs_per_pulse / photons_per_pulse_p2``; for CW weak
    pumps the photon flux ``P2avg / (hbar w2)`` is used.
    """
    ctx = mismatch_context(fiber, pump)
    L = fiber.effective_length
    dws = _bandwidth(ctx, grid, L)
    notes = []

    rate = pairs_per_second(fiber, pump, grid, bandwidth=dws)
    if pump.regime == "pulsed_pulsed":
        per_pulse = pairs_per_pulse(fiber, pump, grid, bandwidth=dws)
        eta = per_pulse / pump.photons_per_pulse_p2
    else:
        per_pulse = rate / pump.f_rep if pump.f_rep else rate * pump.pulse_duration
        if pump.regime in PULSED_WEAK:
            flux = pump.f_rep * pump.photons_per_pulse_p2
        else:
            flux = pump.p2_average / (HBAR * pump.omega_p2)
        eta = rate / flux if flux > 0 else 0.0

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", GainValidityWarning)
        corrected = low_gain_correction(eta)
    notes.extend(str(w.message) for w in caught)

    g = gain_parameter(fiber, pump)
    if g > GAIN_WARNING_THRESHOLD:
        notes.append(f"gain parameter {g:.3g} > {GAIN_WARNING_THRESHOLD}: low-gain result unreliable")

    if pump.regime in PULSED_STRONG and pump.regime in PULSED_WEAK:
        lw = fiber.walkoff_length(pump.omega_p1, pump.omega_p2, pump.pulse_duration)
        if fiber.length > lw / 3.0:
            notes.append(
                f"fiber length {fiber.length:.3g} m exceeds 1/3 of pump walk-off length {lw:.3g} m"
            )

    if grid.filter_band is not None:
        full = _bandwidth(ctx, grid, L, use_filter=False)
        if full > 0 and dws < (1.0 - CLIP_TOLERANCE) * full:
            notes.append(
                f"filter band clips {100 * (1 - dws / full):.1f}% of the phasematching bandwidth"
            )

    return EfficiencyReport(
        regime=pump.regime,
        eta=eta,
        eta_corrected=corrected.eta_corrected,
        error_bound=corrected.error_bound,
        pairs_per_pulse=per_pulse,
        pairs_per_second=rate,
        bandwidth=dws,
        p1_peak=pump.p1_peak,
        gain_parameter=g,
        warnings=tuple(notes),
    )


def spectrum(fiber, pump, grid):
    """Per-bin spectral density at the bin centres; pump bins zeroed."""
    offsets = grid.indices * grid.bin_width
    density = np.asarray(spectral_density(fiber, pump, offsets), dtype=float)
    mask = grid.pump_mask
    density = np.where(mask, 0.0, density)
    return Spectrum(grid, grid.omega_center + offsets, density, mask)


def main_lobe_intervals(fiber, pump, grid):
    """Frequency intervals where |K L / 2| < pi (the sinc^2 main lobes)."""
    ctx = mismatch_context(fiber, pump)
    L = fiber.effective_length
    s, offsets, K = _resolve_nodes(ctx, grid, L)
    inside = np.abs(0.5 * K * L) < math.pi
    padded = np.concatenate(([False], inside, [False])).astype(np.int8)
    edges = np.flatnonzero(np.diff(padded))
    h = grid.bin_width / s
    w = grid.omega_center + offsets
    return [(float(w[a] - h / 2), float(w[b - 1] + h / 2)) for a, b in zip(edges[::2], edges[1::2])]
