"""Single-photon four-wave mixing in optical fibers.

Phasematching, pair spectra and single-photon-to-pair conversion
efficiency in the low-gain regime, plus an exact single-photon oracle.
"""
from .dispersion import (
    BirefringentDispersion,
    EvenTaylorDispersion,
    FullTaylorDispersion,
    TabulatedDispersion,
    beta,
    beta_derivative,
    find_zdw,
)
from .fiber import FiberSpec, effective_length, gamma_from_chi3, walkoff_length
from .pairgen import (
    EfficiencyReport,
    PumpConfig,
    SpectralGrid,
    Spectrum,
    bandwidth_integral,
    conversion_efficiency,
    low_gain_correction,
    pairs_per_pulse,
    pairs_per_second,
    spectral_density,
    spectrum,
)
from .phasematch import (
    MismatchContext,
    birefringent_roots,
    numeric_root,
    required_pump_power,
    total_mismatch,
)
from .scenario import Scenario, load_preset, load_scenario
from .units import omega_to_wavelength, pump_midpoint_and_offset, wavelength_to_omega

__version__ = "0.1.0"
