"""Exception hierarchy.

Exit-code classes used by the CLI:
  parse errors          -> 2
  validation errors     -> 3
  numeric errors        -> 4
  violation errors      -> 1  (a proved statement failed on actual data;
                               any instance is a bug or a counterexample)
"""


class CanonCurveError(Exception):
    """Base class for all package errors."""


# -- parse errors (exit 2) --------------------------------------------------

class CurveSyntaxError(CanonCurveError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}" + (f", col {column}" if column is not None else "") + f": {message}"
        super().__init__(message)


class SemanticError(CanonCurveError):
    """Structurally well-formed input with inconsistent content."""


# -- validation errors (exit 3) ----------------------------------------------

class ValidationError(CanonCurveError):
    """A curve description violates a structural axiom."""


class NotARing(ValidationError):
    pass


class NotLocal(ValidationError):
    pass


class ConductorNotExact(ValidationError):
    pass


class GenusTooSmall(ValidationError):
    pass


class NotASemigroup(ValidationError):
    pass


class DegreeTooSmall(ValidationError):
    pass


class NotNearlyNormal(ValidationError):
    pass


class BadRange(ValidationError):
    pass


class SupportOnSingular(ValidationError):
    pass


class ModelNotVerified(ValidationError):
    pass


# -- numeric errors (exit 4) --------------------------------------------------

class NumericError(CanonCurveError):
    pass


class TruncationInsufficient(NumericError):
    """A local computation gave different answers at doubled order."""


class ProbeExhausted(NumericError):
    pass


class StabilizationFailed(NumericError):
    pass


class NoStabilization(NumericError):
    pass


# -- violation errors (exit 1) -------------------------------------------------

class ViolationError(CanonCurveError):
    """An identity that holds for every valid curve failed on one."""


class DimensionMismatch(ViolationError):
    pass


class DegreeMismatch(ViolationError):
    pass


class InconsistentEuler(ViolationError):
    pass


class CounterexampleFound(ViolationError):
    pass


class FactorizationFailed(ViolationError):
    pass


class RMTViolation(ViolationError):
    pass


class UnsupportedDegreeRegime(ViolationError):
    pass


class GenerationFails(ViolationError):
    pass


class EquivalenceViolation(ViolationError):
    pass
