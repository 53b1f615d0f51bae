"""Error types shared across the package."""


class SenseParseError(Exception):
    """Base class for all package-specific errors."""


class FormatError(SenseParseError):
    """A resource file failed to parse.

    Carries the source path and 1-based line number when known, and puts
    both into the message so CLI users see ``file:line: problem``.
    """

    def __init__(self, message: str, source: str | None = None, line: int | None = None):
        self.source = source
        self.line = line
        prefix = ""
        if source is not None:
            prefix = str(source)
        if line is not None:
            prefix += f":{line}"
        super().__init__(f"{prefix}: {message}" if prefix else message)


class StructuralError(SenseParseError):
    """A loaded resource violates a structural invariant.

    Examples: multiple roots or a parent cycle in the type hierarchy, a
    role restriction naming a missing type, a synset mapped to two types.
    """


class UnknownName(SenseParseError, KeyError):
    """Lookup of a type or synset identifier that does not exist."""

    def __str__(self) -> str:  # KeyError quotes its arg; keep the message plain
        return self.args[0] if self.args else ""


class ParseFailure(SenseParseError):
    """The parser was invoked on input it cannot process at all (e.g. no tokens)."""
