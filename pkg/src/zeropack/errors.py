"""Exception types shared across the package.

Precondition violations on plain function arguments raise ``ValueError``
like any other Python library; the classes here mark input-file problems
and model outcomes that callers (in particular the CLI) need to tell
apart.
"""


class ZeropackError(Exception):
    """Base class for all package-specific errors."""


class RecipeError(ZeropackError):
    """A recipe file is malformed or inconsistent."""


class DataFileError(ZeropackError):
    """A calibration data file is malformed."""


class CalibrationError(ZeropackError):
    """Calibration cannot proceed (under-determined or degenerate data)."""


class ReleaseTooSlowError(ZeropackError):
    """The hole layout does not release the footprint within the time cap."""


class UncloggableError(ZeropackError):
    """A hole does not seal within the maximum allowed deposition."""


class SolverError(ZeropackError):
    """The plate solver produced no usable solution."""


class DesignError(ZeropackError):
    """No thickness in the allowed range satisfies the design constraints."""
