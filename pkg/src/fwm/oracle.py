"""Exact single-photon evolution for validating the low-gain results.

With one weak-pump photon in, the reachable Hilbert space is "photon still
in pump 2" plus "one pair in conjugate-mode pair m", so an (M+1)-component
state vector is an exact, not truncated, description. In the interaction
picture the amplitudes obey

    dc_m/dz = i g_m exp(-i K_m z) c_0
    dc_0/dz = i sum_m g_m exp(+i K_m z) c_m

with ``g_m = 2 gamma sqrt(P1 P2)``. The phases stay in the couplings so
large mismatches do not make the state stiff. Integration is classical RK4
with a fixed step, so results are reproducible bit for bit.
"""
import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, StepSizeError, ValidationError
from .pairgen import mismatch_context, sinc
from .phasematch import total_mismatch

MAX_STEP_COUPLING = 0.01  # step * max|g|
MAX_STEP_PHASE = 0.1  # step * max|K|
# step * sqrt(sum g^2 + max K^2); keeps RK4 norm drift below ~1e-10
MAX_STEP_FREQUENCY = 0.01
MIN_STEPS = 100


def max_step(couplings, mismatches, length):
    """Largest integration step satisfying all three stability bounds."""
    bounds = [length / MIN_STEPS]
    gmax = float(np.max(np.abs(couplings))) if len(couplings) else 0.0
    kmax = float(np.max(np.abs(mismatches))) if len(mismatches) else 0.0
    if gmax > 0:
        bounds.append(MAX_STEP_COUPLING / gmax)
    if kmax > 0:
        bounds.append(MAX_STEP_PHASE / kmax)
    freq = math.sqrt(float(np.sum(np.square(couplings))) + kmax * kmax)
    if freq > 0:
        bounds.append(MAX_STEP_FREQUENCY / freq)
    return min(bounds)


@dataclass(frozen=True)
class OracleConfig:
    couplings: np.ndarray
    mismatches: np.ndarray
    length: float
    step: float = None

    def __post_init__(self):
        g = np.atleast_1d(np.asarray(self.couplings, dtype=float))
        K = np.atleast_1d(np.asarray(self.mismatches, dtype=float))
        if g.ndim != 1 or g.shape != K.shape:
            raise ValidationError("couplings and mismatches must be 1-D and equally long")
        if g.size == 0:
            raise ValidationError("need at least one mode")
        if not self.length > 0:
            raise ValidationError("length must be positive")
        object.__setattr__(self, "couplings", g)
        object.__setattr__(self, "mismatches", K)
        limit = max_step(g, K, self.length)
        if self.step is None:
            object.__setattr__(self, "step", limit)
        elif not 0 < self.step <= limit * (1 + 1e-12):
            raise StepSizeError(self.step, limit)

    @property
    def mode_count(self):
        return self.couplings.size

    @property
    def steps(self):
        return int(math.ceil(self.length / self.step - 1e-9))

    def first_order(self):
        """Low-gain per-mode probabilities g^2 L^2 sinc^2(K L / 2)."""
        s = sinc(0.5 * self.mismatches * self.length)
        return (self.couplings * self.length * s) ** 2

    @property
    def eta(self):
        """Total first-order conversion probability."""
        return float(np.sum(self.first_order()))


@dataclass(frozen=True)
class OracleState:
    amplitude_p2: complex
    amplitudes_pairs: np.ndarray

    @property
    def norm(self):
        return abs(self.amplitude_p2) ** 2 + float(np.sum(np.abs(self.amplitudes_pairs) ** 2))


def evolve(config):
    """Integrate from z = 0 (photon in pump 2) to z = L."""
    g = config.couplings
    K = config.mismatches
    n = config.steps
    h = config.length / n
    c0 = 1.0 + 0.0j
    cm = np.zeros(g.size, dtype=complex)

    def rhs(z, a0, am):
        ph = np.exp(-1j * K * z)
        return 1j * np.dot(g * np.conj(ph), am), 1j * g * ph * a0

    for i in range(n):
        z = i * h
        k1 = rhs(z, c0, cm)
        k2 = rhs(z + 0.5 * h, c0 + 0.5 * h * k1[0], cm + 0.5 * h * k1[1])
        k3 = rhs(z + 0.5 * h, c0 + 0.5 * h * k2[0], cm + 0.5 * h * k2[1])
        k4 = rhs(z + h, c0 + h * k3[0], cm + h * k3[1])
        c0 = c0 + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        cm = cm + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    return OracleState(complex(c0), cm)


def pair_probability_spectrum(state):
    """Per-mode pair probabilities |c_m|^2 and their total."""
    p = np.abs(state.amplitudes_pairs) ** 2
    return p, float(np.sum(p))


def spanning_config(mode_count=32, eta=1e-4, lobes=4, length=1.0):
    """Equal-coupling modes whose K L / 2 span +/- ``lobes`` sinc lobes.

    Mode ``j`` sits at ``K_j L / 2 = pi (2 j + 1 - M) lobes / M``, i.e. the
    bin midpoints of ``[-lobes pi, lobes pi]``. The common coupling is chosen
    so the first-order total is ``eta``; a layout where every mode falls on a
    sinc null is rejected.
    """
    if mode_count < 1:
        raise DomainError("mode_count must be >= 1")
    if not eta >= 0:
        raise DomainError("eta must be >= 0")
    j = np.arange(mode_count)
    x = math.pi * lobes * (2 * j + 1 - mode_count) / mode_count
    K = 2.0 * x / length
    weight = float(np.sum(sinc(x) ** 2))
    if weight < 1e-20 * mode_count:
        raise DomainError(
            f"all {mode_count} modes sit on sinc nulls with lobes={lobes}; change lobes or mode_count"
        )
    g = math.sqrt(eta / weight) / length
    return OracleConfig(np.full(mode_count, g), K, length)


def coupling_for_eta(eta, mode_count=1, mismatch=0.0, length=1.0):
    """Common coupling giving first-order total ``eta`` over identical modes."""
    s = sinc(0.5 * mismatch * length)
    if s == 0:
        raise DomainError("mismatch sits on a sinc null; eta is identically zero")
    return math.sqrt(eta / mode_count) / (length * abs(s))


def correction_curve(couplings, mode_count=1, mismatch=0.0, length=1.0):
    """Exact versus first-order conversion for a sweep of couplings.

    Returns a structured array with fields ``coupling``, ``eta`` (first
    order) and ``exact`` (oracle total probability).
    """
    rows = []
    for g in np.atleast_1d(np.asarray(couplings, dtype=float)):
        cfg = OracleConfig(
            np.full(mode_count, g), np.full(mode_count, float(mismatch)), length
        )
        _, total = pair_probability_spectrum(evolve(cfg))
        rows.append((g, cfg.eta, total))
    return np.array(rows, dtype=[("coupling", float), ("eta", float), ("exact", float)])


def config_from_scenario(fiber, pump, omega_offsets):
    """Oracle modes at the given signal offsets for a physical fiber/pump.

    Each mode stands for one conjugate bin pair; ``g = 2 gamma sqrt(P1 P2)``
    with ``P2`` the single-photon peak power over ``T``.
    """
    ctx = mismatch_context(fiber, pump)
    K = np.atleast_1d(total_mismatch(ctx, np.asarray(omega_offsets, dtype=float)))
    g = 2.0 * fiber.gamma * math.sqrt(pump.p1_peak * pump.p2_peak)
    return OracleConfig(np.full(K.size, g), K, fiber.effective_length)


def to_csv(config, state, path=None):
    """Write ``mode_index,K_m,probability`` rows."""
    p, _ = pair_probability_spectrum(state)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["mode_index", "K_m", "probability"])
    for i, (k, prob) in enumerate(zip(config.mismatches, p)):
        writer.writerow([i, repr(float(k)), repr(float(prob))])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text
