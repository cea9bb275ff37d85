"""Exception hierarchy.

Validation errors mean the caller handed us an impossible scene; numerical
errors mean a solver route failed on a scene that passed validation.
"""


class SpecularError(Exception):
    pass


class ValidationError(SpecularError, ValueError):
    pass


class NonPositiveRadius(ValidationError):
    pass


class FocalInsideSphere(ValidationError):
    pass


class ThetaOutOfRange(ValidationError):
    pass


class NonFiniteInput(ValidationError):
    pass


class InvalidTolerance(ValidationError):
    pass


class PreconditionViolated(ValidationError):
    pass


class NumericalError(SpecularError, ArithmeticError):
    pass


class ComplexRootsDetected(NumericalError):
    pass


class DegenerateLeadingCoefficient(NumericalError):
    pass


class NotARoot(NumericalError):
    pass


class NoPhysicalRoot(NumericalError):
    pass


class MultiplePhysicalRoots(NumericalError):
    pass


class MaxIterExceeded(NumericalError):
    """Raised when the fixed-point loop runs out of iterations.

    The partial trace is kept on ``self.trace``.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class InsufficientTrace(NumericalError):
    pass


class DenominatorVanishes(NumericalError):
    pass


class NoSignChange(NumericalError):
    pass
