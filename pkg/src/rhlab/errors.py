"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class RHLabError(Exception):
    """Base class for library errors."""


class DomainError(RHLabError, ValueError):
    """Argument outside the domain an operation accepts."""


class PoleError(DomainError):
    """Evaluation requested at a pole."""


class PrecisionBudgetError(RHLabError):
    """Working precision below what cancellation control requires.

    ``minimum`` carries the smallest acceptable number of decimal digits
    (or ``None`` when no finite amount of precision would help).
    """

    def __init__(self, message, minimum=None):
        super().__init__(message)
        self.minimum = minimum


class ConditioningError(RHLabError):
    """The evaluation is too ill-conditioned to meet the accuracy contract."""


class CapacityError(RHLabError):
    """A sieve or table request exceeds the supported size."""


class ZeroTableError(RHLabError, ValueError):
    """Malformed zero-ordinate file."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class CacheError(RHLabError):
    """Corrupt or truncated cache file."""

    def __init__(self, message, offset=None):
        super().__init__(message if offset is None else f"byte {offset}: {message}")
        self.offset = offset
