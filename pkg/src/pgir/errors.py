"""Exception types shared across the package."""


class PgirError(Exception):
    """Base class for all domain errors raised by this package."""


class ParseError(PgirError):
    """Malformed input file (edge list, mask, or signal CSV)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GenerationError(PgirError):
    """Random generation could not satisfy its constraints."""


class ValidityError(PgirError):
    """A reconstruction validity condition failed.

    ``check`` is a short machine-readable name of the violated condition;
    the message is the one-line diagnostic surfaced by the CLI and service.
    """

    def __init__(self, check: str, message: str):
        self.check = check
        super().__init__(message)
