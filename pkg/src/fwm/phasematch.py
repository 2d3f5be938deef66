"""Total phase mismatch and phasematching solvers.

Offsets ``Omega`` are measured from the pump midpoint ``omega_0``; the
generated pair sits at ``omega_0 +/- Omega``. External pumping is assumed
throughout, so the natural search range is ``0 < Omega < delta_omega``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .dispersion import BirefringentDispersion, EvenTaylorDispersion, beta, beta_derivative
from .exceptions import (
    DegenerateConfigurationError,
    IncompatibleDispersionError,
    ValidationError,
)
from .solvers import bisect
from .units import C, pump_midpoint_and_offset


@dataclass(frozen=True)
class MismatchContext:
    omega_0: float
    delta_omega: float
    gamma: float
    p1_peak: float
    dispersion: object
    birefringent_term: float = 0.0

    def __post_init__(self):
        if not self.p1_peak >= 0:
            raise ValidationError(f"p1_peak must be >= 0, got {self.p1_peak}")
        if not self.delta_omega >= 0:
            raise ValidationError(f"delta_omega must be >= 0, got {self.delta_omega}")

    @classmethod
    def from_pumps(cls, omega_p1, omega_p2, gamma, p1_peak, dispersion):
        """Build a context; a birefringent model contributes 2 w0 dn / c."""
        omega_0, delta_omega = pump_midpoint_and_offset(omega_p1, omega_p2)
        biref = 0.0
        if isinstance(dispersion, BirefringentDispersion):
            biref = 2.0 * omega_0 * dispersion.delta_n / C
        return cls(omega_0, delta_omega, gamma, p1_peak, dispersion, biref)

    @classmethod
    def from_fiber(cls, fiber, omega_p1, omega_p2, p1_peak):
        return cls.from_pumps(omega_p1, omega_p2, fiber.gamma, p1_peak, fiber.dispersion)

    @property
    def spm_term(self):
        return self.gamma * self.p1_peak

    def with_power(self, p1_peak):
        return MismatchContext(
            self.omega_0, self.delta_omega, self.gamma, p1_peak,
            self.dispersion, self.birefringent_term,
        )

    def _base_model(self):
        d = self.dispersion
        return d.base if isinstance(d, BirefringentDispersion) else d

    def even_coefficients(self):
        """beta2 and beta4 at the pump midpoint."""
        model = self._base_model()
        return (
            beta_derivative(model, self.omega_0, 2),
            beta_derivative(model, self.omega_0, 4),
        )


def _linear_mismatch(ctx, omega_offset):
    """Delta k (without SPM and birefringence) at offset(s) ``omega_offset``."""
    omega_offset = np.asarray(omega_offset, dtype=float)
    model = ctx._base_model()
    dw = ctx.delta_omega
    if isinstance(model, EvenTaylorDispersion):
        b2, b4 = ctx.even_coefficients()
        # validity window still applies to both generated frequencies
        beta(model, ctx.omega_0 + np.abs(omega_offset))
        beta(model, ctx.omega_0 - np.abs(omega_offset))
        o2 = omega_offset * omega_offset
        return b2 * (o2 - dw * dw) + b4 / 12.0 * (o2 * o2 - dw**4)
    w_p1, w_p2 = ctx.omega_0 - dw, ctx.omega_0 + dw
    w = ctx.omega_0 + omega_offset
    w_conj = (w_p1 + w_p2) - w
    return beta(model, w) + beta(model, w_conj) - beta(model, w_p1) - beta(model, w_p2)


def total_mismatch(ctx, omega_offset):
    """Total phase mismatch K(Omega) in 1/m.

    Even-Taylor models use the closed polynomial
    ``b2 (O^2 - dw^2) + b4/12 (O^4 - dw^4)``; other models evaluate
    ``beta(w) + beta(w_p1 + w_p2 - w) - beta(w_p1) - beta(w_p2)``
    directly. Both then add ``gamma * P1`` and the birefringent term.
    """
    out = _linear_mismatch(ctx, omega_offset) + ctx.spm_term + ctx.birefringent_term
    return float(out) if np.ndim(out) == 0 else out


def birefringent_roots(ctx):
    """Phasematched offsets for a birefringence-dominated fiber.

    Solves ``b2 (O^2 - dw^2) + gamma P1 + 2 w0 dn / c = 0`` with ``b4``
    neglected (valid far from the ZDW). Returns ``[-O, +O]``, ``[0.0]``
    for a double root, or ``[]`` when no real root exists.
    """
    b2, _ = ctx.even_coefficients()
    if b2 == 0.0:
        raise DegenerateConfigurationError(
            "beta2 vanishes at the pump midpoint; use numeric_root instead"
        )
    rhs = ctx.delta_omega**2 - (ctx.birefringent_term + ctx.spm_term) / b2
    if rhs < 0:
        return []
    if rhs == 0:
        return [0.0]
    root = math.sqrt(rhs)
    return [-root, root]


def required_pump_power(ctx):
    """Peak power that makes K(0) = 0, in W.

    For even-Taylor dispersion without birefringence this is
    ``(b2 dw^2 + b4/12 dw^4) / gamma``.

    Raises
    ------
    IncompatibleDispersionError
        If the dispersive mismatch at Omega = 0 is already positive, so
        self-phase modulation cannot cancel it.
    """
    k_lin = float(_linear_mismatch(ctx, 0.0)) + ctx.birefringent_term
    power = -k_lin / ctx.gamma
    if power < 0:
        raise IncompatibleDispersionError(
            f"dispersion gives K(0)={k_lin:.4g} 1/m > 0 without pump; "
            "beta2 or beta4 must be positive for external pumping"
        )
    return power + 0.0


def numeric_root(ctx, bracket=None):
    """Root of K on ``bracket`` by bisection.

    The default bracket is ``(0, delta_omega)``, trimmed by one part in 1e6
    at the upper end so the pump line itself is never returned.
    """
    if bracket is None:
        bracket = (0.0, ctx.delta_omega * (1.0 - 1e-6))
    lo, hi = sorted(float(b) for b in bracket)
    probe = np.linspace(lo, hi, 65)
    scale = float(np.max(np.abs(total_mismatch(ctx, probe))))
    return bisect(lambda o: total_mismatch(ctx, o), lo, hi, rel_tol=1e-6, scale=scale)
