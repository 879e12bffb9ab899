"""Exception hierarchy.

Argument errors are plain ``ValueError``. Numerical failures that depend on
the parameter values (poles, degenerate normalizations, calibration) derive
from :class:`DomainError` so callers can tell the two apart.
"""


class DomainError(ValueError):
    """A parameter value sits on a singularity of the requested map."""


class PoleError(DomainError):
    """A tangent/arctangent argument hits its pole."""


class DegenerateParameterError(PoleError):
    """Ising angle for which the dual signal map is undefined."""


class DegenerateChannelError(DomainError):
    """Normalization trace of the hybrid channel vanishes."""


class CalibrationError(DomainError):
    """No unique convention reproduces the QSP/NLFT correspondence."""

    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table or []


class ConsistencyError(DomainError):
    """An internal cross-check failed (e.g. complex residue in a real matrix)."""


class ResourceLimitError(ValueError):
    """Requested dense object is too large to build."""
