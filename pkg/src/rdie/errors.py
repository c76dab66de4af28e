"""Exception types shared across the package."""


class RdieError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(RdieError, ValueError):
    """Arrays have incompatible shapes or channel counts."""


class WindowError(RdieError, ValueError):
    """A window does not fit inside the image."""


class DomainError(RdieError, ValueError):
    """A numeric argument lies outside its mathematical domain."""


class DecodeError(RdieError):
    """An image file is missing, unreadable, or in an unsupported format."""


class ManifestError(RdieError):
    """A dataset manifest is missing, malformed, or has invalid rows."""

    def __init__(self, message, row_errors=()):
        self.row_errors = list(row_errors)
        if self.row_errors:
            details = "\n".join(f"  row {row}: {msg}" for row, msg in self.row_errors)
            message = f"{message}\n{details}"
        super().__init__(message)


class UndefinedCorrelationError(RdieError):
    """Correlation is undefined: fewer than two samples or zero variance."""


class EngineMismatchError(RdieError):
    """The two entropy engines disagreed, so timings would be meaningless."""
