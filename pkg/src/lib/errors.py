class HallGameError(Exception):
    """Base class for every error raised by the package."""


class InputError(HallGameError, ValueError):
    """An operation was called outside its precondition."""


class ParseError(InputError):
    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        self.message = message
        if line_number is None:
            super().__init__(message)
        else:
            super().__init__(f"line {line_number}: {message}")


class SizeBoundError(InputError):
    """An exhaustive search was refused because the instance is too large."""

    def __init__(self, what: str, size: int, bound: int, env_var: str | None = None):
        self.size = size
        self.bound = bound
        message = f"{what}: size {size} exceeds bound {bound}"
        if env_var:
            message += f" (raise it with {env_var})"
        super().__init__(message)


class InvariantViolation(HallGameError, RuntimeError):
    """A proved property failed at runtime, which means an implementation bug."""
