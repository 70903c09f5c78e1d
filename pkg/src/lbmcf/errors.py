"""Exception hierarchy shared across the package."""


class LbmcfError(Exception):
    """Base class for all package-specific errors."""


class InstanceParseError(LbmcfError):
    """Raised when an instance file is malformed.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SolutionFormatError(LbmcfError):
    """Raised when a solution file cannot be parsed."""


class StructuralError(LbmcfError):
    """A solution is malformed with respect to its instance.

    Distinct from infeasibility: a structurally broken solution (path not
    edge-connected, endpoint mismatch, bad commodity index) has no
    meaningful validation report.
    """


class ParameterError(LbmcfError, ValueError):
    """Invalid solver or generator parameters."""


class OracleSizeError(LbmcfError):
    """The instance exceeds the exact oracle's enumeration cap."""


class InternalAssertionError(LbmcfError):
    """A solver produced output violating its own guarantees (a bug)."""
