"""Exception hierarchy.

Validation errors (bad inputs, inconsistent configuration) and numerical
failures (no root, under-resolved grid, ...) are kept apart so the command
line front end can map them onto distinct exit codes.
"""


class FWMError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(FWMError, ValueError):
    """Input violates a documented precondition or invariant."""


class DomainError(ValidationError):
    """Argument outside the mathematical domain of an operation."""


class WindowError(ValidationError):
    """Frequency outside the validity window of a dispersion model."""

    def __init__(self, omega, window):
        self.omega = omega
        self.window = window
        lo, hi = window
        super().__init__(
            f"omega={omega!r} rad/s outside dispersion window [{lo:.6e}, {hi:.6e}] rad/s"
        )


class ConfigurationError(ValidationError):
    """Scenario, pump or grid configuration is inconsistent."""


class NumericalError(FWMError, ArithmeticError):
    """A numerical procedure could not deliver a result."""


class NoRootError(NumericalError):
    """No sign change on the requested bracket."""


class ResolutionError(NumericalError):
    """Quadrature grid is too coarse for the sinc^2 main lobe."""


class IncompatibleDispersionError(NumericalError):
    """Dispersion sign cannot be compensated by self-phase modulation."""


class DegenerateConfigurationError(NumericalError):
    """Closed-form solution undefined (e.g. beta2 == 0); use a numeric solver."""


class StepSizeError(NumericalError):
    """Integration step violates the stability bound."""

    def __init__(self, step, suggested):
        self.step = step
        self.suggested = suggested
        super().__init__(f"step {step:.3e} m too large; use step <= {suggested:.3e} m")
