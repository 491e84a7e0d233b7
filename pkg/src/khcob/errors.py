"""Exception hierarchy for khcob.

Every domain error derives from :class:`KhError` so the CLI can map it to
exit code 1 in one place.
"""


class KhError(Exception):
    """Base class for domain errors."""


class DiagramError(KhError):
    """Invalid diagram description."""


class DuplicateEdgeUse(DiagramError):
    pass


class BadCrossing(DiagramError):
    pass


class SignMismatch(DiagramError):
    pass


class NonIntegerGrading(KhError):
    pass


class PatternMismatch(KhError):
    """A local move does not match the diagram at the requested site."""

    def __init__(self, message, still=None):
        super().__init__(message)
        self.still = still

    def __str__(self):
        msg = super().__str__()
        if self.still is not None:
            return f"still {self.still}: {msg}"
        return msg


class OrientationClash(PatternMismatch):
    pass


class NotAnIsomorphism(KhError):
    pass


class NotChainMap(KhError):
    pass


class GradingMismatch(KhError):
    pass


class NotEndocobordism(KhError):
    pass


class NonZeroEuler(KhError):
    pass


class UnsupportedVariant(PatternMismatch):
    """A move version outside the supported catalog."""


class MovieSyntaxError(KhError, SyntaxError):
    """Movie script syntax error carrying a line and column."""

    def __init__(self, message, line, column=1):
        SyntaxError.__init__(self, f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
