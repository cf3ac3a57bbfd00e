"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ResourceError(RuntimeError):
    """The requested computation exceeds a configured size cap."""


class ParseError(ValueError):
    """A circuit source text violates the DSL grammar.

    ``line`` and ``column`` are 1-based and point at the offending token.
    """

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")
