"""Fiber description and derived lengths."""
import math
from dataclasses import dataclass

from .dispersion import BirefringentDispersion, beta_derivative
from .exceptions import ConfigurationError, DomainError
from .units import C, EPSILON_0

# Below this alpha*L the exponential is replaced by its series.
_SERIES_THRESHOLD = 1e-8


def gamma_from_chi3(chi3, omega, n, a_eff):
    """Waveguide nonlinear parameter 3 chi3 w / (2 eps0 c^2 n^2 A_eff), in 1/(W m)."""
    if not (chi3 > 0 and omega > 0 and n > 0 and a_eff > 0):
        raise DomainError("chi3, omega, n and a_eff must all be positive")
    return 3.0 * chi3 * omega / (2.0 * EPSILON_0 * C**2 * n**2 * a_eff)


def effective_length(alpha, length):
    """Absorption-corrected length (1 - exp(-alpha L)) / alpha.

    Exactly ``length`` when ``alpha == 0``; a second-order series is used
    while ``alpha * length`` is tiny to avoid cancellation.
    """
    if alpha < 0 or length < 0:
        raise DomainError(f"alpha and length must be >= 0, got {alpha}, {length}")
    x = alpha * length
    if x < _SERIES_THRESHOLD:
        return length * (1.0 - 0.5 * x)
    return -math.expm1(-x) / alpha


def walkoff_length(pulse_duration, beta1_p1, beta1_p2):
    """Distance over which the two pump pulses separate by one pulse duration.

    Returns ``math.inf`` when the group delays are equal (to rounding).
    """
    if not pulse_duration > 0:
        raise DomainError("pulse_duration must be positive")
    diff = abs(beta1_p1 - beta1_p2)
    if diff == 0.0 or pulse_duration / diff == math.inf:
        return math.inf
    return pulse_duration / diff


@dataclass(frozen=True)
class FiberSpec:
    """One fiber: nonlinearity, length, loss and dispersion.

    ``gamma`` may be given directly. When ``chi3``, ``n_ref``, ``a_eff`` and
    ``omega_ref`` are all supplied it is cross-checked against
    :func:`gamma_from_chi3` (or computed from them if ``gamma`` is None).
    A non-zero ``delta_n`` wraps ``dispersion`` in a
    :class:`~fwm.dispersion.BirefringentDispersion`.
    """

    gamma: float
    length: float
    dispersion: object
    alpha: float = 0.0
    delta_n: float = 0.0
    chi3: float = None
    n_ref: float = None
    a_eff: float = None
    omega_ref: float = None

    def __post_init__(self):
        material = (self.chi3, self.n_ref, self.a_eff)
        if any(v is not None for v in material):
            if any(v is None for v in material) or self.omega_ref is None:
                raise ConfigurationError(
                    "chi3, n_ref, a_eff and omega_ref must be given together"
                )
            computed = gamma_from_chi3(self.chi3, self.omega_ref, self.n_ref, self.a_eff)
            if self.gamma is None:
                object.__setattr__(self, "gamma", computed)
            elif abs(self.gamma - computed) > 1e-12 * computed:
                raise ConfigurationError(
                    f"gamma={self.gamma} inconsistent with chi3 path value {computed}"
                )
        if self.gamma is None or not self.gamma > 0:
            raise ConfigurationError(f"gamma must be positive, got {self.gamma}")
        if not self.length > 0:
            raise ConfigurationError(f"length must be positive, got {self.length}")
        if not self.alpha >= 0:
            raise ConfigurationError(f"alpha must be >= 0, got {self.alpha}")
        disp = self.dispersion
        if self.delta_n:
            if isinstance(disp, BirefringentDispersion):
                if disp.delta_n != self.delta_n:
                    raise ConfigurationError("delta_n disagrees with birefringent dispersion")
            else:
                object.__setattr__(self, "dispersion", BirefringentDispersion(disp, self.delta_n))
        elif isinstance(disp, BirefringentDispersion):
            object.__setattr__(self, "delta_n", disp.delta_n)

    @property
    def effective_length(self):
        return effective_length(self.alpha, self.length)

    def walkoff_length(self, omega_p1, omega_p2, pulse_duration):
        b1 = beta_derivative(self.dispersion, omega_p1, 1)
        b2 = beta_derivative(self.dispersion, omega_p2, 1)
        return walkoff_length(pulse_duration, b1, b2)
