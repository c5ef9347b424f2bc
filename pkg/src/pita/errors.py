"""Exception hierarchy and process exit codes."""

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class PitaError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(PitaError):
    """Invalid configuration, dimensions, or call arguments (exit code 2)."""


class DimensionError(ConfigError):
    pass


class AlignmentError(ConfigError):
    """A time span is not an integral number of steps."""


class ScheduleError(ConfigError):
    """A subdivision schedule violates its spacing bounds."""


class InsufficientTermsError(ConfigError):
    """A sequence is too short for the requested extrapolation order."""


class NumericsError(PitaError):
    """Numerical failure during computation (exit code 3)."""


class NonFiniteError(NumericsError):
    pass


class SingularMatrixError(NumericsError):
    pass


class DegenerateDenominatorError(NumericsError):
    pass


class StabilityError(NumericsError):
    pass
