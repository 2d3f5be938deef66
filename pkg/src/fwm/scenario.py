"""Scenario files and the built-in fiber presets.

A scenario is a flat ``key = value`` text file with dotted section
prefixes::

    # comment
    fiber.gamma = 180.0
    pump.regime = pulsed_pulsed

Units are fixed per key (see :data:`KEYS`). Unknown keys, duplicates and
malformed lines are rejected with the offending line number.
"""
from dataclasses import dataclass, field
from pathlib import Path

from .dispersion import EvenTaylorDispersion, FullTaylorDispersion, TabulatedDispersion
from .exceptions import ConfigurationError, ValidationError
from .fiber import FiberSpec
from .pairgen import PumpConfig, SpectralGrid
from .units import NM, PS, PS2_PER_M, PS3_PER_M, PS4_PER_M, PS_PER_M, wavelength_to_omega


class ScenarioError(ConfigurationError):
    """Scenario text could not be parsed or validated."""


# key -> (type, unit, description, default); default REQUIRED means mandatory
REQUIRED = object()
KEYS = {
    "label": (str, "-", "free-text scenario name", ""),
    "fiber.gamma": (float, "1/(W m)", "waveguide nonlinear parameter", None),
    "fiber.length_m": (float, "m", "physical fiber length", REQUIRED),
    "fiber.alpha_per_m": (float, "1/m", "absorption coefficient", 0.0),
    "fiber.delta_n": (float, "-", "birefringence n_slow - n_fast", 0.0),
    "fiber.chi3_m2_per_v2": (float, "m^2/V^2", "third-order susceptibility", None),
    "fiber.n_ref": (float, "-", "refractive index at the dispersion centre", None),
    "fiber.a_eff_m2": (float, "m^2", "effective mode area", None),
    "dispersion.model": (str, "-", "even_taylor | full_taylor | tabulated", "even_taylor"),
    "dispersion.center_nm": (float, "nm", "expansion wavelength (default: pump midpoint)", None),
    "dispersion.beta0_per_m": (float, "1/m", "full_taylor beta0", 0.0),
    "dispersion.beta1_ps_per_m": (float, "ps/m", "full_taylor beta1", 0.0),
    "dispersion.beta2_ps2_per_m": (float, "ps^2/m", "beta2 at the centre", 0.0),
    "dispersion.beta3_ps3_per_m": (float, "ps^3/m", "full_taylor beta3", 0.0),
    "dispersion.beta4_ps4_per_m": (float, "ps^4/m", "beta4 at the centre", 0.0),
    "dispersion.table": (str, "path", "CSV omega_rad_per_s,beta_per_m (tabulated)", None),
    "dispersion.window_lo_nm": (float, "nm", "short-wavelength edge of validity window", None),
    "dispersion.window_hi_nm": (float, "nm", "long-wavelength edge of validity window", None),
    "pump.lambda_p1_nm": (float, "nm", "strong pump wavelength", REQUIRED),
    "pump.lambda_p2_nm": (float, "nm", "weak (single-photon) pump wavelength", REQUIRED),
    "pump.regime": (str, "-", "pulsed_pulsed | pulsed_cw | equivalent_single_photon | cw_cw", "pulsed_pulsed"),
    "pump.scheme": (str, "-", "external (only supported value)", "external"),
    "pump.p1_avg_w": (float, "W", "strong pump average power", REQUIRED),
    "pump.pulse_duration_ps": (float, "ps", "pulse duration / characteristic time T", REQUIRED),
    "pump.f_rep_hz": (float, "Hz", "repetition rate", None),
    "pump.photons_per_pulse_p2": (float, "-", "weak-pump photons per pulse", 1.0),
    "pump.p2_avg_w": (float, "W", "weak pump average power (CW weak regimes)", None),
    "grid.bin_width_rad_per_s": (float, "rad/s", "spectral bin (default 2 pi / T)", None),
    "grid.span": (float, "-", "grid half-width in units of the pump offset", 2.0),
    "grid.filter_lo_nm": (float, "nm", "filter passband short edge", None),
    "grid.filter_hi_nm": (float, "nm", "filter passband long edge", None),
    "grid.oversample": (int, "-", "quadrature nodes per bin (default automatic)", None),
}


@dataclass(frozen=True)
class Scenario:
    fiber: FiberSpec
    pump: PumpConfig
    grid: SpectralGrid
    label: str
    values: dict = field(repr=False)
    base_dir: Path = field(default=None, repr=False)

    def with_value(self, key, value):
        """Rebuild with one key overridden (value in the key's file units)."""
        if key not in KEYS:
            raise ScenarioError(f"unknown key {key!r}")
        values = dict(self.values)
        values[key] = KEYS[key][0](value)
        return build_scenario(values, self.base_dir)



def parse_scenario_text(text, source="<string>"):
    """Parse scenario text into a typed ``{key: value}`` dict."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ScenarioError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ScenarioError(f"{source}:{lineno}: duplicate key {key!r}")
        if not value:
            raise ScenarioError(f"{source}:{lineno}: empty value for {key!r}")
        kind = KEYS[key][0]
        try:
            values[key] = kind(value)
        except ValueError:
            raise ScenarioError(
                f"{source}:{lineno}: {key} expects {kind.__name__}, got {value!r}"
            ) from None
    return values


def _get(values, key):
    if key in values:
        return values[key]
    default = KEYS[key][3]
    if default is REQUIRED:
        raise ScenarioError(f"missing required key {key!r}")
    return default


def _build_dispersion(values, omega_0, base_dir):
    model = _get(values, "dispersion.model")
    center_nm = _get(values, "dispersion.center_nm")
    omega_ref = omega_0 if center_nm is None else wavelength_to_omega(center_nm * NM)
    lo_nm, hi_nm = _get(values, "dispersion.window_lo_nm"), _get(values, "dispersion.window_hi_nm")
    window = None
    if (lo_nm is None) != (hi_nm is None):
        raise ScenarioError("dispersion.window_lo_nm and window_hi_nm must be given together")
    if lo_nm is not None:
        if not 0 < lo_nm < hi_nm:
            raise ScenarioError("dispersion window needs 0 < window_lo_nm < window_hi_nm")
        window = (wavelength_to_omega(hi_nm * NM), wavelength_to_omega(lo_nm * NM))
    b2 = _get(values, "dispersion.beta2_ps2_per_m") * PS2_PER_M
    b4 = _get(values, "dispersion.beta4_ps4_per_m") * PS4_PER_M
    if model == "even_taylor":
        for odd in ("dispersion.beta0_per_m", "dispersion.beta1_ps_per_m", "dispersion.beta3_ps3_per_m"):
            if values.get(odd):
                raise ScenarioError(f"{odd} is not used by the even_taylor model")
        return EvenTaylorDispersion(omega_ref, b2, b4, window)
    if model == "full_taylor":
        return FullTaylorDispersion(
            omega_ref,
            beta0=_get(values, "dispersion.beta0_per_m"),
            beta1=_get(values, "dispersion.beta1_ps_per_m") * PS_PER_M,
            beta2=b2,
            beta3=_get(values, "dispersion.beta3_ps3_per_m") * PS3_PER_M,
            beta4=b4,
            window=window,
        )
    if model == "tabulated":
        table = _get(values, "dispersion.table")
        if table is None:
            raise ScenarioError("tabulated dispersion needs dispersion.table")
        path = Path(table)
        if not path.is_absolute() and base_dir is not None:
            path = Path(base_dir) / path
        if not path.exists():
            raise ScenarioError(f"dispersion table {path} not found")
        return TabulatedDispersion.from_csv(path)
    raise ScenarioError(f"dispersion.model must be even_taylor, full_taylor or tabulated, got {model!r}")


def build_scenario(values, base_dir=None):
    """Validate typed key/values and assemble fiber, pump and grid."""
    try:
        if _get(values, "pump.scheme") != "external":
            raise ScenarioError(
                "only external pumping (pair generated between the pumps) is supported, "
                f"got pump.scheme = {values['pump.scheme']!r}"
            )
        f_rep = _get(values, "pump.f_rep_hz")
        pump = PumpConfig(
            lambda_p1=_get(values, "pump.lambda_p1_nm") * NM,
            lambda_p2=_get(values, "pump.lambda_p2_nm") * NM,
            regime=_get(values, "pump.regime"),
            p1_avg=_get(values, "pump.p1_avg_w"),
            pulse_duration=_get(values, "pump.pulse_duration_ps") * PS,
            f_rep=f_rep,
            photons_per_pulse_p2=_get(values, "pump.photons_per_pulse_p2"),
            p2_avg=_get(values, "pump.p2_avg_w"),
        )
        dispersion = _build_dispersion(values, pump.omega_0, base_dir)
        chi3 = _get(values, "fiber.chi3_m2_per_v2")
        n_ref, a_eff = _get(values, "fiber.n_ref"), _get(values, "fiber.a_eff_m2")
        omega_ref = None
        if chi3 is not None or n_ref is not None or a_eff is not None:
            omega_ref = getattr(dispersion, "omega_ref", pump.omega_0)
        fiber = FiberSpec(
            gamma=_get(values, "fiber.gamma"),
            length=_get(values, "fiber.length_m"),
            dispersion=dispersion,
            alpha=_get(values, "fiber.alpha_per_m"),
            delta_n=_get(values, "fiber.delta_n"),
            chi3=chi3,
            n_ref=n_ref,
            a_eff=a_eff,
            omega_ref=omega_ref,
        )
        lo_nm, hi_nm = _get(values, "grid.filter_lo_nm"), _get(values, "grid.filter_hi_nm")
        band = None
        if (lo_nm is None) != (hi_nm is None):
            raise ScenarioError("grid.filter_lo_nm and grid.filter_hi_nm must be given together")
        if lo_nm is not None:
            if not 0 < lo_nm < hi_nm:
                raise ScenarioError("filter band needs 0 < filter_lo_nm < filter_hi_nm")
            band = (wavelength_to_omega(hi_nm * NM), wavelength_to_omega(lo_nm * NM))
        grid = SpectralGrid.for_pump(
            pump,
            bin_width=_get(values, "grid.bin_width_rad_per_s"),
            span=_get(values, "grid.span"),
            filter_band=band,
            oversample=_get(values, "grid.oversample"),
        )
    except ScenarioError:
        raise
    except ValidationError as exc:
        raise ScenarioError(f"invalid scenario: {exc}") from exc
    return Scenario(fiber, pump, grid, _get(values, "label"), dict(values), base_dir)


def load_scenario(path):
    """Read, parse and validate a scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    return build_scenario(parse_scenario_text(text, str(path)), path.parent)


PRESETS = {
    "pm-silica": """\
label = Biref. (silica)
fiber.gamma = 4.6e-3
fiber.length_m = 0.10          # effective interaction length after walk-off
fiber.alpha_per_m = 0
fiber.delta_n = 3e-4
dispersion.model = even_taylor
dispersion.beta2_ps2_per_m = 0.040   # derived: places roots at 728/790 nm
dispersion.beta4_ps4_per_m = 0
pump.lambda_p1_nm = 890
pump.lambda_p2_nm = 660
pump.regime = pulsed_pulsed
pump.p1_avg_w = 5.0
pump.pulse_duration_ps = 5
pump.f_rep_hz = 80e6
pump.photons_per_pulse_p2 = 1
""",
    "microstructured-silica": """\
label = Microstr. (silica)
fiber.gamma = 2.7e-2
fiber.length_m = 2.0
fiber.alpha_per_m = 0
dispersion.model = full_taylor        # expanded at the pump midpoint (716 nm ZDW)
dispersion.beta2_ps2_per_m = 0        # pumps symmetric about the ZDW
dispersion.beta3_ps3_per_m = 1e-4     # derived: typical silica slope, sets ZDW crossing
dispersion.beta4_ps4_per_m = 3.7494985e-6   # derived: K(0)=0 at 6250 W peak
pump.lambda_p1_nm = 760
pump.lambda_p2_nm = 676.75
pump.regime = pulsed_pulsed
pump.p1_avg_w = 1.0
pump.pulse_duration_ps = 2
pump.f_rep_hz = 80e6
pump.photons_per_pulse_p2 = 1
grid.filter_lo_nm = 686
grid.filter_hi_nm = 750
""",
    "chalc-microwire": """\
label = Microwire (As2Se3)
fiber.gamma = 180
fiber.length_m = 0.10
fiber.alpha_per_m = 0
dispersion.model = even_taylor
dispersion.beta2_ps2_per_m = 0.05
dispersion.beta4_ps4_per_m = 0
pump.lambda_p1_nm = 1620
pump.lambda_p2_nm = 1480
pump.regime = pulsed_pulsed
pump.p1_avg_w = 1.28e-4        # 0.8 W peak at 80 MHz, 2 ps
pump.pulse_duration_ps = 2
pump.f_rep_hz = 80e6
pump.photons_per_pulse_p2 = 1
""",
}

ZDW_BRACKETS_NM = {"microstructured-silica": (706.0, 726.0)}


def preset_text(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise ScenarioError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def load_preset(name):
    return build_scenario(parse_scenario_text(preset_text(name), f"<preset {name}>"))


def describe_keys():
    """Human-readable table of keys, units and defaults."""
    lines = []
    for key, (kind, unit, desc, default) in KEYS.items():
        shown = "required" if default is REQUIRED else ("-" if default is None else repr(default))
        lines.append(f"{key:32s} {unit:10s} {desc} [default: {shown}]")
    return "\n".join(lines)
