"""Fisher and Wigner-Yanase skew information for an Unruh-accelerated Dirac qubit.

The Unruh channel and two external noise channels (phase damping and squeezed
generalized amplitude damping) are represented both as Kraus sets and as affine
maps on the Bloch ball.  Information quantities are computed from closed forms,
from generic Bloch-vector functionals, and from a density-matrix SLD oracle.
"""

from udqubit.errors import (
    BranchError,
    CompletenessViolation,
    DomainError,
    NormViolation,
    ShapeViolation,
    SingularState,
    UdqError,
    UnknownFigure,
)

__version__ = "0.1.0"

__all__ = [
    "BranchError",
    "CompletenessViolation",
    "DomainError",
    "NormViolation",
    "ShapeViolation",
    "SingularState",
    "UdqError",
    "UnknownFigure",
]
