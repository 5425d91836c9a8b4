class LevmemError(Exception):
    """Base class for all errors raised by levmem."""


class ConfigError(LevmemError, ValueError):
    """Invalid or inconsistent configuration."""


class NumericalError(LevmemError, ArithmeticError):
    """A computation produced a value it should never produce."""


class IntegrationError(NumericalError):
    """The ODE integrator failed; ``t`` is where it stopped."""

    def __init__(self, message, t=None):
        super().__init__(message if t is None else f"{message} (t = {t:.6g} s)")
        self.t = t


class PoleError(NumericalError):
    def __init__(self, omega):
        super().__init__(f"transmission denominator vanishes at omega = {omega!r}")
        self.omega = omega


class NotFoundError(LevmemError):
    """A search (root, crossing) found nothing in its allowed range."""


class UndefinedCorrelationError(LevmemError):
    """g2(0) requested for a state with (numerically) zero photons."""
