"""Exception hierarchy shared by all modules."""


class UdqError(Exception):
    """Base class for every error raised by this package."""


class NormViolation(UdqError, ValueError):
    """Bloch vector lies outside the closed unit ball."""


class ShapeViolation(UdqError, ValueError):
    """Matrix is not a valid qubit density matrix (shape, hermiticity, trace)."""


class CompletenessViolation(UdqError, ValueError):
    """Kraus operators do not satisfy sum K^dag K = I."""


class DomainError(UdqError, ValueError):
    """Channel parameter outside its physical domain."""


class BranchError(UdqError, ArithmeticError):
    """No root of the SGAD mixing-probability quadratic is physical."""


class SingularState(UdqError, ArithmeticError):
    """Information functional is genuinely singular (pure state, nonzero radial derivative)."""


class UnknownFigure(UdqError, KeyError):
    """Requested figure preset does not exist."""
