"""Exception hierarchy.

``ValidationError`` marks bad input (CLI exit code 2); ``NumericalError``
marks a computation that failed to converge or is inconclusive (exit code 3).
"""


class ValidationError(ValueError):
    """A parameter set or request violates its documented preconditions."""


class NumericalError(RuntimeError):
    """A numerical procedure failed or could not decide."""


class UnboundedBranch(ValidationError):
    pass


class NoAdmissibleInterval(ValidationError):
    pass


class DegenerateDirection(ValidationError):
    pass


class ExcludedAngle(ValidationError):
    pass


class DivisionDegenerate(ValidationError):
    pass


class NotDouble(ValidationError):
    pass


class OutsideScenario(ValidationError):
    pass


class SignConventionViolated(ValidationError):
    pass


class SolvabilityDegenerate(ValidationError):
    pass


class DeterminantZero(ValidationError):
    pass


class Inconclusive(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class StepFailure(NumericalError):
    pass
