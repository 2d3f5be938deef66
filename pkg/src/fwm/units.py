"""Physical constants and wavelength/frequency conversion.

Everything inside the package is SI with angular frequencies in rad/s.
The ``*_TO_SI`` factors convert the customary user-facing units.
"""
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

C = 2.99792458e8  # m/s, exact
HBAR = 1.054571817e-34  # J s
EPSILON_0 = 8.8541878128e-12  # F/m

NM = 1e-9
PS = 1e-12
PS2_PER_M = 1e-24  # ps^2/m -> s^2/m
PS3_PER_M = 1e-36
PS4_PER_M = 1e-48
PS_PER_M = 1e-12


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = C
    hbar: float = HBAR
    epsilon_0: float = EPSILON_0


CONSTANTS = PhysicalConstants()


def wavelength_to_omega(wavelength):
    """Vacuum wavelength (m) to angular frequency (rad/s)."""
    lam = np.asarray(wavelength, dtype=float)
    if np.any(~(lam > 0)):
        raise DomainError(f"wavelength must be positive, got {wavelength!r}")
    out = 2.0 * np.pi * C / lam
    return float(out) if out.ndim == 0 else out


def omega_to_wavelength(omega):
    """Angular frequency (rad/s) to vacuum wavelength (m)."""
    w = np.asarray(omega, dtype=float)
    if np.any(~(w > 0)):
        raise DomainError(f"angular frequency must be positive, got {omega!r}")
    out = 2.0 * np.pi * C / w
    return float(out) if out.ndim == 0 else out


def pump_midpoint_and_offset(omega_p1, omega_p2):
    """Return ``(omega_0, delta_omega)`` for two pump frequencies.

    ``omega_0`` is the arithmetic mean, ``delta_omega`` half the (absolute)
    separation, so ``omega_0 +/- delta_omega`` gives back the pumps.
    """
    if not (omega_p1 > 0 and omega_p2 > 0):
        raise DomainError("pump frequencies must be positive")
    return 0.5 * (omega_p1 + omega_p2), 0.5 * abs(omega_p2 - omega_p1)
