"""Unruh, phase-damping (QND) and squeezed generalized amplitude damping channels.

Natural units throughout (hbar = k_B = c = 1), so every parameter is a bare
dimensionless number.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Literal

import numpy as np

from udqubit.errors import BranchError, DomainError
from udqubit.qcore import AffineChannel, KrausSet, affine_from_kraus, tolerances

QndMode = Literal["paper", "kraus"]
QND_MODES: tuple[str, ...] = ("paper", "kraus")

R_SLACK = 1e-9
R_MAX = math.pi / 4


# ---------------------------------------------------------------------------
# Unruh channel
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnruhParams:
    r: float

    def __post_init__(self) -> None:
        # slack admits pi/4 typed to ten digits
        if not (-R_SLACK <= self.r <= R_MAX + R_SLACK) or math.isnan(self.r):
            raise DomainError(f"Unruh parameter r={self.r!r} outside [0, pi/4]")


def unruh_r_from_acceleration(a_u: float, omega: float) -> UnruhParams:
    """Unruh parameter from acceleration ``a_u`` and Dirac mode frequency ``omega``.

    ``cos r = (exp(-2 pi omega / a_u) + 1)^(-1/2)``, so ``r`` runs from 0 (no
    acceleration) to ``pi/4`` (infinite acceleration).
    """
    if not a_u > 0 or not omega > 0:
        raise DomainError(f"need a_u > 0 and omega > 0, got a_u={a_u!r}, omega={omega!r}")
    cos_r = 1.0 / math.sqrt(math.exp(-2 * math.pi * omega / a_u) + 1.0)
    return UnruhParams(math.acos(min(cos_r, 1.0)))


def unruh_kraus(p: UnruhParams) -> KrausSet:
    c, s = math.cos(p.r), math.sin(p.r)
    return KrausSet(
        (np.array([[c, 0], [0, 1]]), np.array([[0, 0], [s, 0]])),
        label="unruh",
    )


def unruh_affine(p: UnruhParams) -> AffineChannel:
    c, s = math.cos(p.r), math.sin(p.r)
    return AffineChannel(np.diag([c, c, c * c]), np.array([0.0, 0.0, -s * s]))


# ---------------------------------------------------------------------------
# Phase damping (QND) in a squeezed thermal Ohmic bath
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QndParams:
    t: float
    T: float
    s: float
    a: float = 0.0
    omega0: float = 1.0
    omega_c: float = 100.0
    gamma0: float = 0.1

    def __post_init__(self) -> None:
        if self.t < 0 or self.T < 0 or self.gamma0 < 0 or not self.omega_c > 0:
            raise DomainError(f"invalid QND parameters: {self}")


def qnd_gamma(p: QndParams) -> float:
    """Decoherence function gamma(t) for an Ohmic squeezed thermal bath with cutoff ``omega_c``."""
    wc, t, a = p.omega_c, p.t, p.a
    pref = p.gamma0 * p.T / (math.pi * wc)
    thermal = 2 * wc * t * math.atan(wc * t) - math.log1p((wc * t) ** 2)
    squeezed = (
        4 * wc * (t - a) * math.atan(2 * wc * (t - a))
        - 4 * wc * (t - 2 * a) * math.atan(wc * (t - 2 * a))
        + 4 * a * wc * math.atan(2 * a * wc)
        + 2 * math.log1p((wc * (t - 2 * a)) ** 2)
        - math.log1p(4 * (wc * (t - a)) ** 2)
        - math.log1p(4 * (a * wc) ** 2)
    )
    return pref * math.cosh(2 * p.s) * thermal - 0.5 * pref * math.sinh(2 * p.s) * squeezed


def phase_damping_kraus(gamma: float, omega0: float, t: float) -> KrausSet:
    """Two-element phase-damping Kraus set with coherence factor ``exp(-omega0^2 gamma)``."""
    if gamma < 0:
        raise DomainError(f"gamma(t) = {gamma!r} < 0 is unphysical")
    decay = math.exp(-(omega0**2) * gamma)
    ph = np.exp(-1j * omega0 * t)
    return KrausSet(
        (
            math.sqrt((1 + decay) / 2) * np.array([[ph, 0], [0, 1]]),
            math.sqrt((1 - decay) / 2) * np.array([[-ph, 0], [0, 1]]),
        ),
        label="qnd",
    )


def qnd_kraus(p: QndParams) -> KrausSet:
    return phase_damping_kraus(qnd_gamma(p), p.omega0, p.t)


def phase_damping_affine_paper(gamma: float, omega0: float, t: float) -> AffineChannel:
    """Affine map behind the closed-form QND Bloch vector.

    Transverse components shrink by ``exp(-omega0^2 gamma / 4)`` and the azimuth
    advances ``phi -> phi + omega0 t``; z is untouched.
    """
    f = math.exp(-(omega0**2) * gamma / 4)
    cw, sw = math.cos(omega0 * t), math.sin(omega0 * t)
    A = np.array([[f * cw, f * sw, 0.0], [-f * sw, f * cw, 0.0], [0.0, 0.0, 1.0]])
    return AffineChannel(A, np.zeros(3))


def qnd_affine_paper(p: QndParams) -> AffineChannel:
    return phase_damping_affine_paper(qnd_gamma(p), p.omega0, p.t)


def qnd_affine(p: QndParams, mode: QndMode = "paper") -> AffineChannel:
    if mode == "paper":
        return qnd_affine_paper(p)
    if mode == "kraus":
        return affine_from_kraus(qnd_kraus(p))
    raise ValueError(f"unknown QND mode {mode!r}; expected one of {QND_MODES}")


def transverse_factor(ch: AffineChannel) -> float:
    """Shrink factor of the transverse Bloch plane (norm of the x-column's xy part)."""
    return float(math.hypot(ch.A[0, 0], ch.A[1, 0]))


# ---------------------------------------------------------------------------
# Squeezed generalized amplitude damping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SgadParams:
    t: float
    T: float
    s: float
    phi_s: float = 0.0
    omega0: float = 0.1
    gamma0: float = 0.1

    def __post_init__(self) -> None:
        if self.t < 0 or self.T < 0 or self.gamma0 < 0 or not self.omega0 > 0:
            raise DomainError(f"invalid SGAD parameters: {self}")


@dataclass(frozen=True)
class SgadDerived:
    N_th: float
    N: float
    a_sq: float
    A: float
    B: float
    C: float
    D: float
    p1: float
    p2: float
    alpha: float
    mu: float
    nu: float
    branch: str  # "+", "-" or "limit"

    @property
    def coherence(self) -> float:
        """Transverse amplitude ``p1 sqrt(1-alpha) + p2 sqrt((1-mu)(1-nu))``."""
        return self.p1 * math.sqrt(1 - self.alpha) + self.p2 * math.sqrt((1 - self.mu) * (1 - self.nu))

    @property
    def conjugate_coherence(self) -> float:
        """Amplitude ``p2 sqrt(mu nu)`` of the phase-conjugating part."""
        return self.p2 * math.sqrt(self.mu * self.nu)


def thermal_occupation(omega0: float, T: float) -> float:
    if T == 0:
        return 0.0
    x = omega0 / T
    return 0.0 if x > 700 else 1.0 / math.expm1(x)


@dataclass(frozen=True)
class _SgadAux:
    n_th: float
    N: float
    a_sq: float
    A: float
    B: float
    u: float  # 1 - C
    sigma: float  # D - exp(-k) = exp(-k) sinh^2 x
    E: float  # exp(-k)
    k: float  # gamma0 (2N + 1) t
    u_err: float  # rounding bound on u
    x: float  # |gamma0 a_sq t / 2|

    @property
    def C(self) -> float:
        return self.A + self.B + self.E

    @property
    def D(self) -> float:
        return self.E + self.sigma


K_IDENTITY = 1e-120
X_UNSQUEEZED = 1e-17


def _sgad_aux(p: SgadParams) -> _SgadAux:
    n_th = thermal_occupation(p.omega0, p.T)
    ch, sh = math.cosh(p.s), math.sinh(p.s)
    N = n_th * (ch * ch + sh * sh) + sh * sh
    a_sq = math.sinh(2 * p.s) * (2 * n_th + 1)
    k = p.gamma0 * (2 * N + 1) * p.t
    x = abs(p.gamma0 * a_sq * p.t / 2)
    E = math.exp(-k)
    decay = -math.expm1(-k)
    # |a_sq| < 2N + 1, so x < k/2; rewrite sinh/cosh ratios with decaying exponentials
    if a_sq == 0 or k == 0 or N == 0:
        A = 0.0
    else:
        A = (2 * N + 1) / (2 * N) * math.expm1(-2 * x) ** 2 * math.exp(2 * x - k) / (2 * decay)
    B = N / (2 * N + 1) * decay
    # 1 - C and D - E without the O(1) cancellations of the displayed forms
    u = (N + 1) / (2 * N + 1) * decay - A
    sigma = (math.expm1(-2 * x) / 2) ** 2 * math.exp(2 * x - k)
    u_err = 8 * sys.float_info.epsilon * (decay + A)
    return _SgadAux(n_th, N, a_sq, A, B, u, sigma, E, k, u_err, x)


def p2_roots(A: float, B: float, u: float, sigma: float) -> dict[str, float]:
    """Both roots of the mixing-probability quadratic, keyed by the sign of the radical.

    The displayed ``p2 = [num +/- 2 sqrt(rad)] / den`` is rewritten with
    ``C = 1 - u`` and ``D = 1 - (A + B + u) + sigma``, which removes the O(1)
    cancellations of the printed coefficients as ``t -> 0``.  When the two terms
    of ``num +/- 2 sqrt(rad)`` nearly cancel, the root is taken from the product
    of roots, ``c0 / (num -/+ 2 sqrt(rad))``.
    """
    D = 1 - (A + B + u) + sigma
    num = A * A * (1 + B) + B * B * (1 + A) + A * B * u + (A + B) * (u - sigma) + sigma * (u - 2)
    den = (A + B + u) ** 2 - 4 * sigma
    f1, f2 = sigma - A * B - A * u, sigma - A * B - B * u
    c0 = (A - B) ** 2 + A * B * (A * B + 2 * (A + B) - 2 * sigma + 4 * u) - 2 * sigma * (A + B) + sigma * sigma
    # rad = D f1 f2 is O(t^4); take the root factor by factor so it cannot underflow
    sq = 2 * math.sqrt(max(D, 0.0)) * math.sqrt(abs(f1)) * math.sqrt(abs(f2)) if f1 * f2 >= 0 or f1 == 0 else 0.0
    roots = {}
    for label, sign in (("+", 1.0), ("-", -1.0)):
        top, other = num + sign * sq, num - sign * sq
        if abs(top) >= abs(other):
            roots[label] = top / den if den != 0 else math.copysign(math.inf, top)
        else:
            roots[label] = c0 / other
    return roots


def _clip01(v: float) -> float:
    return min(max(v, 0.0), 1.0)


def sgad_derived(p: SgadParams) -> SgadDerived:
    """Auxiliary quantities and Kraus weights of the SGAD channel.

    The quadratic for ``p2`` has two roots.  A root is admissible when ``p2``,
    ``alpha``, ``mu`` and ``nu`` all lie in ``[0, 1]``.  Among admissible roots the
    one whose transverse amplitude best reproduces ``sqrt(D)`` (the coherence
    decay of the squeezed-bath master equation) is taken, preferring ``+`` when
    both reproduce it; in that case both roots give the same channel.
    """
    aux = _sgad_aux(p)
    n_th, N, a_sq, A, B, C, D, E = aux.n_th, aux.N, aux.a_sq, aux.A, aux.B, aux.C, aux.D, aux.E
    tol = tolerances().structural

    if aux.x < X_UNSQUEEZED or aux.k < K_IDENTITY:
        # identity (t = 0) and the unsqueezed GAD / AD limits.  Squeezing only moves
        # the transverse amplitudes, by O(x), so below X_UNSQUEEZED the limit is the
        # exact channel to rounding; below K_IDENTITY the O(t^2) coefficients of
        # the p2 quadratic underflow while the channel is the identity to O(k)
        p2 = N / (2 * N + 1)
        decay = 1 - E
        nu = decay if p2 > 0 else 0.0
        return SgadDerived(n_th, N, a_sq, A, B, C, D, 1 - p2, p2, decay, 0.0, nu, "limit")

    sqrt_d = math.sqrt(D)
    candidates = []
    for label, p2 in p2_roots(A, B, aux.u, aux.sigma).items():
        if not (-tol <= p2 <= 1 + tol) or p2 <= 0:
            continue
        p1 = 1 - p2
        mu, nu = A / p2, B / p2
        if p1 > 0:
            alpha = aux.u / p1
        elif aux.u <= tol:
            alpha = 0.0
        else:
            continue
        if abs(aux.u) <= aux.u_err:
            # u = p1 alpha is rounding noise here (p1 ~ t^2 near T = 0); the
            # K1, K2 block then carries weight below the rounding level
            alpha = _clip01(alpha)
        if not all(-tol <= v <= 1 + tol for v in (alpha, mu, nu)):
            continue
        p2, alpha, mu, nu = (_clip01(v) for v in (p2, alpha, mu, nu))
        rec = SgadDerived(n_th, N, a_sq, A, B, C, D, 1 - p2, p2, alpha, mu, nu, label)
        candidates.append((abs(rec.coherence - sqrt_d), label, rec))
    if not candidates:
        raise BranchError(f"no physical root of the p2 quadratic at {p}")
    candidates.sort(key=lambda c: (c[0], c[1] != "+"))
    best = candidates[0]
    for cand in candidates[1:]:
        if cand[1] == "+" and cand[0] - best[0] <= 1e-9:
            best = cand
    return best[2]


def sgad_kraus_from_derived(d: SgadDerived, phi_s: float) -> KrausSet:
    sp1, sp2 = math.sqrt(d.p1), math.sqrt(d.p2)
    return KrausSet(
        (
            sp1 * np.array([[math.sqrt(1 - d.alpha), 0], [0, 1]]),
            sp1 * np.array([[0, 0], [math.sqrt(d.alpha), 0]]),
            sp2 * np.array([[math.sqrt(1 - d.mu), 0], [0, math.sqrt(1 - d.nu)]]),
            sp2 * np.array([[0, math.sqrt(d.nu)], [math.sqrt(d.mu) * np.exp(-1j * phi_s), 0]]),
        ),
        label="sgad",
    )


def sgad_kraus(p: SgadParams) -> KrausSet:
    return sgad_kraus_from_derived(sgad_derived(p), p.phi_s)


def sgad_affine(p: SgadParams) -> AffineChannel:
    return affine_from_kraus(sgad_kraus(p))
