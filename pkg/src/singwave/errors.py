"""Exception types shared across the package."""


class SingwaveError(Exception):
    """Base class for domain errors raised by this package."""


class UnsupportedOrderError(SingwaveError, ValueError):
    """A derivative order beyond what the object can certify was requested."""


class ResolutionError(SingwaveError, ValueError):
    """A sampling grid is too coarse for the smallest regularization width."""


class ZoneError(SingwaveError, ValueError):
    """A phase-space point or path violates the required zone membership."""


class ZoneConstantError(SingwaveError, RuntimeError):
    """The diagonalizer degenerated; the zone constant was chosen too small."""


class IntegrationError(SingwaveError, RuntimeError):
    """The adaptive integrator could not reach the requested endpoint."""


class MeasurementError(SingwaveError, ValueError):
    """Wave-packet measurement windows are inconsistent (overlap or wrap)."""
