"""Exception types shared across the library."""


class WittLabError(Exception):
    """Base class for all library errors."""


class DivisionByZero(WittLabError, ZeroDivisionError):
    """Inversion of zero, or a caller-asserted irreducible modulus exposed a zero divisor."""


class DescriptorMismatch(WittLabError):
    """Operands belong to different field descriptors."""


class NotAFiniteExtension(WittLabError):
    """Trace/norm requested along a step that is not a finite extension in the tower."""


class UnknownVariable(WittLabError):
    """A variable name does not occur in the field tower."""


class ZeroLeadingTerm(WittLabError):
    """A Laurent series was built with a vanishing leading coefficient."""


class NotIntegral(WittLabError):
    """Ghost coordinates do not come from an integral Witt vector."""


class CharacteristicObstruction(WittLabError):
    """Operation requires an invertible integer that vanishes in this characteristic."""


class EmptyTruncation(WittLabError):
    """A truncation set became empty where a nonempty one is required."""


class NotSubTruncation(WittLabError):
    """Restriction target is not a subset of the source truncation set."""


class ZeroArgument(WittLabError):
    """Zero passed where a unit is required (valuation, dlog, Teichmann lift of a unit...)."""


class InsufficientFactorization(WittLabError):
    """Supplied factorization does not expose the structure the operation needs."""


class InsufficientPrecision(WittLabError):
    """A Laurent coefficient beyond the tracked precision was requested."""


class UncoveredPole(WittLabError):
    """A denominator has a pole outside the supplied place list."""


class ModulusViolation(WittLabError):
    """Weil-reciprocity datum fails its modulus inequality at some place."""


class DegenerateParameter(WittLabError):
    """Parameter value collapses a construction (e.g. Cathelineau at x in {0,1})."""


class ParseError(WittLabError):
    """Malformed expression or job text."""

    def __init__(self, message: str, line: int = 1, col: int = 0):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class ValidationError(WittLabError):
    """Structurally invalid input data."""
