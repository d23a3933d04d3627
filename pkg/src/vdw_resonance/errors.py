"""Exception hierarchy shared by the library and the CLI."""


class ResonanceError(Exception):
    """Base class for all errors raised by this package."""


class ParameterDomainError(ResonanceError, ValueError):
    """A physical or numerical parameter lies outside its admissible range."""

    def __init__(self, field: str, value, message: str = ""):
        self.field = field
        self.value = value
        text = f"{field}={value!r} is out of range"
        if message:
            text += f": {message}"
        super().__init__(text)


class GridTooCoarseError(ResonanceError, ValueError):
    """The grid cannot represent the kernel exactly."""


class CFLViolationError(ResonanceError):
    """A time step exceeds the stability bound of the Burgers substep."""


class NonFiniteStateError(ResonanceError, FloatingPointError):
    """The evolving field picked up NaN or inf values."""

    def __init__(self, t: float):
        self.t = t
        super().__init__(f"non-finite value in field at t={t:.6g}")


class NoRecurrenceError(ResonanceError):
    """Recurrence analysis found no return below the threshold."""


class ConfigError(ResonanceError):
    """Malformed or invalid run configuration."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        parts = []
        if line is not None:
            parts.append(f"line {line}")
        if field is not None:
            parts.append(field)
        prefix = ": ".join(parts)
        super().__init__(f"{prefix}: {message}" if prefix else message)
