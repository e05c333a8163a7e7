"""Exception hierarchy.

Every error carries a short machine-readable ``code``.  Subclasses of
:class:`ValidationError` signal bad input or an infeasible configuration
(CLI exit status 2); subclasses of :class:`NumericError` signal a numerical
routine that failed on valid input (CLI exit status 3).
"""


class SpindleError(Exception):
    code = "SPINDLE"
    exit_status = 1


class ValidationError(SpindleError, ValueError):
    code = "VALIDATION"
    exit_status = 2


class NumericError(SpindleError, ArithmeticError):
    code = "NUMERIC"
    exit_status = 3


# geometry primitives
class DegeneratePair(ValidationError):
    code = "DEGENERATE_PAIR"


class PairTooFar(ValidationError):
    code = "PAIR_TOO_FAR"


class ChordTooLong(ValidationError):
    code = "CHORD_TOO_LONG"


class OrientationError(ValidationError):
    code = "ORIENTATION"


# bodies
class BodySpecError(ValidationError):
    code = "BODY_SPEC"

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class InvalidBody(ValidationError):
    code = "INVALID_BODY"


# hulls
class EmptyInput(ValidationError):
    code = "EMPTY_INPUT"


class NotRFeasible(ValidationError):
    code = "NOT_R_FEASIBLE"

    def __init__(self, enclosing_radius, r):
        super().__init__(
            f"points do not fit in a disc of radius r={r:g}: "
            f"minimal enclosing radius is {enclosing_radius:.12g}"
        )
        self.enclosing_radius = enclosing_radius
        self.r = r


class EmptyIntersection(ValidationError):
    code = "EMPTY_INTERSECTION"


# caps
class DomainError(ValidationError):
    code = "DOMAIN"


class OutsideBody(ValidationError):
    code = "OUTSIDE_BODY"


class NoIntersection(NumericError):
    code = "NO_INTERSECTION"


class RootBracketFailure(NumericError):
    code = "ROOT_BRACKET"


class SingularJacobian(NumericError):
    code = "SINGULAR_JACOBIAN"


# duals and limits
class DualInfeasible(ValidationError):
    code = "DUAL_INFEASIBLE"


class Infeasible(ValidationError):
    code = "INFEASIBLE"


class SingularIntegrand(NumericError):
    code = "SINGULAR_INTEGRAND"


class QuadratureNoConvergence(NumericError):
    code = "QUADRATURE"


# monte carlo
class InsufficientPoints(ValidationError):
    code = "INSUFFICIENT_POINTS"


class ConfigError(ValidationError):
    code = "CONFIG"
