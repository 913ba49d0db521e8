"""Exception hierarchy.

Every error raised on purpose by this package derives from
:class:`PhotonPressureError`, so callers can catch one base class.  The CLI
maps the subclasses to distinct exit codes.
"""


class PhotonPressureError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(PhotonPressureError, ValueError):
    """Invalid run configuration (unknown preset, bad key, axis collision)."""


class DomainError(PhotonPressureError, ValueError):
    """Physically invalid input (non-positive length, rate, temperature...)."""


class BeyondArchError(DomainError):
    """Flux bias outside the arch: the Josephson inductance diverges."""


class CalibrationError(DomainError):
    """Noise-calibration input is unusable (e.g. non-positive background)."""


class UnstableRegimeError(DomainError):
    """Cooperativity at or above the self-oscillation threshold on the
    amplifying sideband; occupations are undefined there."""


class NonIdentifiableError(PhotonPressureError):
    """The data cannot constrain the requested parameters."""


class BackgroundEstimationError(PhotonPressureError, ValueError):
    """Not enough off-resonant baseline to estimate the background."""


class TraceFormatError(PhotonPressureError, ValueError):
    """A trace or parameter file failed to parse.

    Carries the 1-based line number when one is known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConvergenceError(PhotonPressureError):
    """A fit did not converge and the caller required convergence."""
