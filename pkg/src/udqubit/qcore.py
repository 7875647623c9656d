"""Qubit states, Kraus channels and affine Bloch maps.

Bloch vectors are plain ``numpy`` arrays of shape ``(3,)`` and density matrices
are ``(2, 2)`` complex arrays.  Channels come in two interchangeable forms: a
:class:`KrausSet` acting on density matrices and an :class:`AffineChannel`
acting on Bloch vectors as ``zeta -> A @ zeta + C``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from udqubit.errors import CompletenessViolation, NormViolation, ShapeViolation

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
IDENTITY = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used across the package.

    The first block are algorithmic constants (they change what a function
    returns or raises); the second block are verification gates used by the
    consistency checks and the ``check`` command.
    """

    norm: float = 1e-10
    structural: float = 1e-10
    algebraic: float = 1e-12
    psd: float = 1e-10
    pure: float = 1e-9
    sld_cutoff: float = 1e-12
    # verification gates
    fisher: float = 1e-6
    closed: float = 1e-8
    gradient: float = 1e-9


_TOL = Tolerances()


def tolerances() -> Tolerances:
    """Return the active tolerance set."""
    return _TOL


def configure_tolerances(tol: Tolerances | None = None, **overrides: float) -> Tolerances:
    """Replace the active tolerances; returns the previous set so callers can restore it."""
    global _TOL
    previous = _TOL
    base = tol if tol is not None else _TOL
    unknown = set(overrides) - {f.name for f in dataclasses.fields(Tolerances)}
    if unknown:
        raise KeyError(f"unknown tolerance keys: {sorted(unknown)}")
    _TOL = dataclasses.replace(base, **overrides)
    return previous


# ---------------------------------------------------------------------------
# Containers
# ---------------------------------------------------------------------------


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class KrausSet:
    ops: tuple[np.ndarray, ...]
    label: str = ""

    def __post_init__(self) -> None:
        ops = tuple(_frozen(np.asarray(k, dtype=complex)) for k in self.ops)
        if not ops or any(k.shape != (2, 2) for k in ops):
            raise ShapeViolation("Kraus operators must be a non-empty list of 2x2 matrices")
        object.__setattr__(self, "ops", ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)


@dataclass(frozen=True, eq=False)
class AffineChannel:
    """Affine map on the Bloch ball, ``zeta -> A @ zeta + C``."""

    A: np.ndarray
    C: np.ndarray

    def __post_init__(self) -> None:
        A = _frozen(np.asarray(self.A, dtype=float))
        C = _frozen(np.asarray(self.C, dtype=float))
        if A.shape != (3, 3) or C.shape != (3,):
            raise ShapeViolation("affine channel needs A of shape (3, 3) and C of shape (3,)")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "C", C)

    @classmethod
    def identity(cls) -> "AffineChannel":
        return cls(np.eye(3), np.zeros(3))

    def __call__(self, zeta: np.ndarray) -> np.ndarray:
        return self.A @ np.asarray(zeta, dtype=float) + self.C

    def then(self, outer: "AffineChannel") -> "AffineChannel":
        """Channel that applies ``self`` first and ``outer`` second."""
        return compose_affine(outer, self)


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------


def bloch_from_angles(theta: float, phi: float) -> np.ndarray:
    """Bloch vector of the pure input state with polar angle ``theta`` and azimuth ``phi``.

    The y-component carries a minus sign, ``(cos phi sin theta, -sin phi sin theta, cos theta)``,
    because the input state has coherence ``rho_01 = e^{i phi} sin(theta)/2``.
    """
    st = math.sin(theta)
    return np.array([math.cos(phi) * st, -math.sin(phi) * st, math.cos(theta)])


def density_from_bloch(zeta: np.ndarray) -> np.ndarray:
    zeta = np.asarray(zeta, dtype=float)
    if zeta.shape != (3,):
        raise ShapeViolation(f"Bloch vector must have shape (3,), got {zeta.shape}")
    norm = float(np.linalg.norm(zeta))
    if norm > 1 + _TOL.norm:
        raise NormViolation(f"|zeta| = {norm!r} exceeds 1")
    x, y, z = zeta
    return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]], dtype=complex)


def check_density(rho: np.ndarray, *, psd: bool = True) -> np.ndarray:
    """Validate a qubit density matrix and return it as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ShapeViolation(f"density matrix must be 2x2, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > _TOL.algebraic:
        raise ShapeViolation("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > _TOL.algebraic:
        raise ShapeViolation(f"density matrix trace is {np.trace(rho).real!r}, not 1")
    if psd and np.linalg.eigvalsh(rho)[0] < -_TOL.psd:
        raise ShapeViolation("density matrix has a negative eigenvalue")
    return rho


def bloch_from_density(rho: np.ndarray) -> np.ndarray:
    rho = check_density(rho, psd=False)
    return np.array([np.trace(rho @ s).real for s in PAULIS])


# ---------------------------------------------------------------------------
# Channels
# ---------------------------------------------------------------------------


def completeness_residual(kraus: KrausSet) -> float:
    """Max-norm of ``sum_k K^dag K - I``."""
    total = sum(k.conj().T @ k for k in kraus.ops)
    return float(np.max(np.abs(total - IDENTITY)))


def _require_complete(kraus: KrausSet) -> None:
    res = completeness_residual(kraus)
    if res > _TOL.structural:
        raise CompletenessViolation(
            f"{kraus.label or 'Kraus set'}: completeness residual {res:.3e} exceeds {_TOL.structural:g}"
        )


def _kraus_action(kraus: KrausSet, rho: np.ndarray) -> np.ndarray:
    return sum(k @ rho @ k.conj().T for k in kraus.ops)


def apply_kraus(kraus: KrausSet, rho: np.ndarray) -> np.ndarray:
    _require_complete(kraus)
    rho = check_density(rho)
    out = _kraus_action(kraus, rho)
    # exact hermitisation; Kraus sums are Hermitian up to rounding
    return 0.5 * (out + out.conj().T)


def affine_from_kraus(kraus: KrausSet) -> AffineChannel:
    """Extract ``(A, C)`` by probing the six axis states and the maximally mixed state.

    For a linear map this is exact: ``C`` is the image of the origin and column
    ``j`` of ``A`` is half the difference of the images of ``+e_j`` and ``-e_j``.
    """
    _require_complete(kraus)

    def image(zeta: np.ndarray) -> np.ndarray:
        out = _kraus_action(kraus, density_from_bloch(zeta))
        return np.array([np.trace(out @ s).real for s in PAULIS])

    C = image(np.zeros(3))
    A = np.empty((3, 3))
    for j, e in enumerate(np.eye(3)):
        A[:, j] = 0.5 * (image(e) - image(-e))
    return AffineChannel(A, C)


def compose_affine(outer: AffineChannel, inner: AffineChannel) -> AffineChannel:
    """Affine map of ``outer`` after ``inner``: ``(A_o A_i, A_o C_i + C_o)``."""
    return AffineChannel(outer.A @ inner.A, outer.A @ inner.C + outer.C)


def compose_all(channels: Sequence[AffineChannel]) -> AffineChannel:
    """Compose channels listed in the order they act."""
    total = AffineChannel.identity()
    for ch in channels:
        total = compose_affine(ch, total)
    return total


PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)


def choi_of_channel(kraus: KrausSet) -> np.ndarray:
    """Normalized Choi matrix ``(id (x) E)(|Phi+><Phi+|)`` with the channel on the second mode."""
    _require_complete(kraus)
    proj = np.outer(PHI_PLUS, PHI_PLUS.conj())
    return sum(np.kron(IDENTITY, k) @ proj @ np.kron(IDENTITY, k).conj().T for k in kraus.ops)


def min_eigenvalue(m: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])


def is_psd(m: np.ndarray, tol: float | None = None) -> bool:
    return min_eigenvalue(m) >= -(_TOL.psd if tol is None else tol)
