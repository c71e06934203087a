"""Exception types shared across the package."""


class CurveOrbitError(Exception):
    """Base class for domain errors (CLI exit code 2)."""


class ParseError(Exception):
    """Malformed input text (CLI exit code 1)."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}"
            if col is not None:
                where += f", col {col}"
            where += ": "
        super().__init__(where + message)


class ZeroDivisor(CurveOrbitError):
    """Division by a scalar that is zero or not invertible."""


class RootNotRepresentable(CurveOrbitError):
    """A required root does not exist in the coefficient tower."""


class PointNotOnCurve(CurveOrbitError):
    """A local construction was requested at a point off the curve."""


class DegenerateFlag(CurveOrbitError):
    """Point/line data that do not form a flag."""


class TruncationTooSmall(CurveOrbitError):
    """Series truncation order too small to decide a computation."""


class PrecisionExhausted(CurveOrbitError):
    """Branch expansion failed to separate within the retry budget."""


class NoWitnessPoint(CurveOrbitError):
    """No suitable smooth non-flex point was found within the search bound."""


class InfiniteStabilizer(CurveOrbitError):
    """The configuration has infinitely many symmetries."""


class DegenerateTuple(CurveOrbitError):
    """A tuple invariant was requested for a tuple with no spread."""


class ZeroLeadingCoefficient(CurveOrbitError):
    """The series coefficient that should carry the answer vanished."""
