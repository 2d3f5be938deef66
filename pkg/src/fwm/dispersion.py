"""Propagation-constant models.

Four interchangeable models provide ``beta(omega)`` and its derivatives:

* :class:`EvenTaylorDispersion` -- even polynomial around a centre
  frequency, holding only ``beta2`` and ``beta4``. Only differences of beta
  ever enter the mismatch, so the constant and odd terms are dropped.
* :class:`FullTaylorDispersion` -- degree-4 polynomial including ``beta0``,
  ``beta1`` and ``beta3`` (needed for group-velocity walk-off).
* :class:`BirefringentDispersion` -- wraps a base model and adds the
  slow-axis index offset ``delta_n``.
* :class:`TabulatedDispersion` -- cubic spline through measured samples.

Models are frozen dataclasses and safe to share between threads.
"""
import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .exceptions import ConfigurationError, DomainError, ValidationError, WindowError
from .solvers import bisect
from .units import C

_FACTORIAL = (1.0, 1.0, 2.0, 6.0, 24.0)


def _default_window(omega):
    return (0.5 * omega, 1.5 * omega)


def _check_window(model, omega):
    lo, hi = model.window
    w = np.asarray(omega, dtype=float)
    if np.any(w < lo) or np.any(w > hi):
        bad = w[(w < lo) | (w > hi)].flat[0] if w.ndim else float(w)
        raise WindowError(float(bad), model.window)
    return w


def _poly_derivative(coeffs, x, order):
    """``order``-th derivative of sum_k coeffs[k] x^k / k!."""
    out = np.zeros_like(x, dtype=float)
    for k in range(order, len(coeffs)):
        if coeffs[k]:
            out = out + coeffs[k] * x ** (k - order) / _FACTORIAL[k - order]
    return out


@dataclass(frozen=True)
class EvenTaylorDispersion:
    """beta(w0 + x) = beta2 x^2/2 + beta4 x^4/24, relative to beta(w0)."""

    omega_0: float
    beta2: float
    beta4: float = 0.0
    window: tuple = None

    def __post_init__(self):
        if not self.omega_0 > 0:
            raise ValidationError("omega_0 must be positive")
        if self.window is None:
            object.__setattr__(self, "window", _default_window(self.omega_0))

    @property
    def coefficients(self):
        return (0.0, 0.0, self.beta2, 0.0, self.beta4)

    @property
    def omega_ref(self):
        return self.omega_0


@dataclass(frozen=True)
class FullTaylorDispersion:
    omega_ref: float
    beta0: float = 0.0
    beta1: float = 0.0
    beta2: float = 0.0
    beta3: float = 0.0
    beta4: float = 0.0
    window: tuple = None

    def __post_init__(self):
        if not self.omega_ref > 0:
            raise ValidationError("omega_ref must be positive")
        if self.window is None:
            object.__setattr__(self, "window", _default_window(self.omega_ref))

    @property
    def coefficients(self):
        return (self.beta0, self.beta1, self.beta2, self.beta3, self.beta4)


@dataclass(frozen=True)
class BirefringentDispersion:
    """Common material dispersion plus a slow/fast index difference.

    ``beta`` on the fast axis is the base model; the slow axis adds
    ``delta_n * omega / c``.
    """

    base: object
    delta_n: float

    def __post_init__(self):
        if isinstance(self.base, BirefringentDispersion):
            raise ValidationError("nested birefringent models are not supported")
        if not abs(self.delta_n) < 1e-2:
            raise ValidationError(f"|delta_n| must be < 1e-2, got {self.delta_n}")

    @property
    def window(self):
        return self.base.window


@dataclass(frozen=True)
class TabulatedDispersion:
    omega: np.ndarray
    beta: np.ndarray
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        b = np.asarray(self.beta, dtype=float)
        if w.ndim != 1 or w.shape != b.shape:
            raise ValidationError("omega and beta must be 1-D arrays of equal length")
        if w.size < 5:
            raise ValidationError(f"need at least 5 samples, got {w.size}")
        if np.any(np.diff(w) <= 0):
            raise ValidationError("omega samples must be strictly increasing")
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "_spline", CubicSpline(w, b, bc_type="not-a-knot"))

    @property
    def window(self):
        return (float(self.omega[0]), float(self.omega[-1]))

    @classmethod
    def from_csv(cls, path):
        """Load ``omega_rad_per_s,beta_per_m`` (header required, ascending)."""
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["omega_rad_per_s", "beta_per_m"]:
                raise ConfigurationError(
                    f"{path}: header must be 'omega_rad_per_s,beta_per_m', got {header!r}"
                )
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if not row or not "".join(row).strip():
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except (ValueError, IndexError) as exc:
                    raise ConfigurationError(f"{path}:{lineno}: bad row {row!r}") from exc
        if not rows:
            raise ConfigurationError(f"{path}: no samples")
        arr = np.array(rows)
        return cls(arr[:, 0], arr[:, 1])


def _fd_step(model):
    w = model.omega
    return float(np.min(np.diff(w)))


def beta(model, omega, axis="fast"):
    """Propagation constant in 1/m.

    For :class:`EvenTaylorDispersion` the value is relative to an arbitrary
    constant. ``axis`` only matters for birefringent models.
    """
    if isinstance(model, BirefringentDispersion):
        w = np.asarray(omega, dtype=float)
        out = beta(model.base, w)
        if axis == "slow":
            out = out + model.delta_n * w / C
        elif axis != "fast":
            raise DomainError(f"axis must be 'fast' or 'slow', got {axis!r}")
        return out
    w = _check_window(model, omega)
    if isinstance(model, TabulatedDispersion):
        out = model._spline(w)
    else:
        out = _poly_derivative(model.coefficients, w - model.omega_ref, 0)
    return float(out) if np.ndim(out) == 0 else out


def beta_derivative(model, omega, order):
    """``order``-th derivative of beta, in s^order/m.

    Taylor models are differentiated analytically. Tabulated models use a
    centred 5-point finite-difference stencil on the spline, with a step of
    one quarter of the smallest sample spacing.
    """
    if order not in (1, 2, 3, 4):
        raise DomainError(f"derivative order must be 1..4, got {order!r}")
    if isinstance(model, BirefringentDispersion):
        out = beta_derivative(model.base, omega, order)
        # slow-axis offset is linear in omega; fast axis is reported
        return out
    w = _check_window(model, omega)
    if isinstance(model, TabulatedDispersion):
        h = 0.25 * _fd_step(model)
        lo, hi = model.window
        # shift stencil centre inward so every node stays inside the table
        wc = np.clip(w, lo + 2 * h, hi - 2 * h)
        f = [model._spline(wc + k * h) for k in (-2, -1, 0, 1, 2)]
        if order == 1:
            out = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h)
        elif order == 2:
            out = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
        elif order == 3:
            out = (-f[0] + 2 * f[1] - 2 * f[3] + f[4]) / (2 * h**3)
        else:
            out = (f[0] - 4 * f[1] + 6 * f[2] - 4 * f[3] + f[4]) / h**4
    else:
        out = _poly_derivative(model.coefficients, w - model.omega_ref, order)
    return float(out) if np.ndim(out) == 0 else out


def find_zdw(model, bracket):
    """Zero-dispersion frequency (beta2 = 0) inside ``bracket`` by bisection.

    Raises
    ------
    NoRootError
        If beta2 has the same sign at both ends of the bracket.
    """
    lo, hi = sorted(float(b) for b in bracket)
    probe = np.linspace(lo, hi, 65)
    scale = float(np.max(np.abs(beta_derivative(model, probe, 2))))
    return bisect(lambda w: beta_derivative(model, w, 2), lo, hi, rel_tol=1e-6, scale=scale)
