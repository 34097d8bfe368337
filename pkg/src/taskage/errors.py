"""Exception types shared across the package."""


class TaskAgeError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(TaskAgeError):
    """Invalid user-supplied configuration (CLI exit code 2)."""


class ValidationError(TaskAgeError):
    """Data violates a documented invariant."""


class TableParseError(ValidationError):
    """Malformed row in an accuracy-table file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InstabilityError(TaskAgeError):
    """The queue has no steady state (utilization at or above one)."""

    def __init__(self, lam, n_c):
        self.rho = lam * n_c
        super().__init__(
            f"unstable queue: rho = lambda*n_c = {lam:g}*{n_c:g} = {self.rho:g} >= 1"
        )


class DivergenceError(TaskAgeError):
    """Accuracy of zero: the age never resets and the peak age diverges."""


class TraceOrderError(TaskAgeError):
    """Departure events were fed to the age tracker out of time order."""
