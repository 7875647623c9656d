"""Quantum Fisher and Wigner-Yanase skew information for the UD qubit.

Three independent routes are provided:

* closed forms, transcribed term by term from the published expressions for
  the pure Unruh, Unruh+QND and Unruh+SGAD regimes;
* the generic Bloch-vector functionals evaluated on ``zeta(alpha)`` and its
  derivative (the ground truth of this package);
* a density-matrix oracle that solves the symmetric logarithmic derivative
  equation in the eigenbasis of ``rho`` (Fisher only).

The closed forms are evaluated exactly as printed; where they disagree with the
generic route the disagreement is reported, not repaired.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from udqubit.channels import (
    QndParams,
    SgadDerived,
    SgadParams,
    UnruhParams,
    qnd_affine,
    qnd_gamma,
    sgad_affine,
    sgad_derived,
    unruh_affine,
)
from udqubit.errors import NormViolation, SingularState
from udqubit.qcore import (
    AffineChannel,
    bloch_from_angles,
    compose_affine,
    density_from_bloch,
    tolerances,
)


class ParamTag(str, enum.Enum):
    THETA = "theta"
    PHI = "phi"


class Method(str, enum.Enum):
    CLOSED_FORM = "closed"
    GENERIC_ANALYTIC = "generic"
    GENERIC_NUMERIC = "generic_numeric"
    SLD_ORACLE = "sld"


class Kind(str, enum.Enum):
    FISHER = "fisher"
    SKEW = "skew"


Noise = Union[QndParams, SgadParams, None]


@dataclass(frozen=True)
class StatePath:
    """Input angles pushed through the Unruh channel and, optionally, one external noise channel."""

    r: float
    theta: float
    phi: float
    noise: Noise = None
    qnd_mode: str = "paper"

    @property
    def regime(self) -> str:
        if self.noise is None:
            return "Unruh"
        return "UnruhQnd" if isinstance(self.noise, QndParams) else "UnruhSgad"

    def stack(self) -> AffineChannel:
        """Combined affine map ``A_new zeta0 + C_new`` (independent of theta and phi)."""
        unruh = unruh_affine(UnruhParams(self.r))
        if self.noise is None:
            return unruh
        if isinstance(self.noise, QndParams):
            outer = qnd_affine(self.noise, self.qnd_mode)
        else:
            outer = sgad_affine(self.noise)
        return compose_affine(outer, unruh)

    def angle(self, tag: ParamTag) -> float:
        return self.theta if ParamTag(tag) is ParamTag.THETA else self.phi


@dataclass(frozen=True)
class InfoResult:
    value: float
    method: Method
    raw: float
    residual_vs_oracle: float | None = None


# ---------------------------------------------------------------------------
# Generic Bloch functionals
# ---------------------------------------------------------------------------


def _radial_parts(zeta: np.ndarray, dzeta: np.ndarray) -> tuple[float, float, float]:
    zeta = np.asarray(zeta, dtype=float)
    dzeta = np.asarray(dzeta, dtype=float)
    n2 = float(zeta @ zeta)
    tol = tolerances()
    if n2 > (1 + tol.norm) ** 2:
        raise NormViolation(f"|zeta|^2 = {n2!r} exceeds 1")
    return n2, float(zeta @ dzeta), float(dzeta @ dzeta)


# below this, 1 - |zeta|^2 is rounding noise and the radial term is undetermined
PURITY_FLOOR = 1e-13
# 1 - |zeta|^2 below this is rounding noise; sqrt() would amplify it to ~1e-8
ROUNDOFF_MIXEDNESS = 4 * sys.float_info.epsilon


def _near_pure(n2: float, radial: float) -> bool:
    """True when the radial term must be dropped; raises if it is genuinely singular."""
    eps = tolerances().pure
    if n2 <= 1 - eps:
        return False
    if abs(radial) <= eps:
        return True
    if 1 - n2 > PURITY_FLOOR:
        return False
    raise SingularState(f"pure state (1-|zeta|^2 = {1 - n2:.2e}) with zeta.dzeta = {radial:.2e}")


def fisher_bloch(zeta: np.ndarray, dzeta: np.ndarray) -> float:
    """``(zeta . dzeta)^2 / (1 - |zeta|^2) + |dzeta|^2``; pure states keep only the tangential term."""
    n2, radial, d2 = _radial_parts(zeta, dzeta)
    if _near_pure(n2, radial):
        return d2
    return radial**2 / (1 - n2) + d2


def skew_bloch(zeta: np.ndarray, dzeta: np.ndarray) -> float:
    """Wigner-Yanase skew information of a qubit in Bloch form."""
    n2, radial, d2 = _radial_parts(zeta, dzeta)
    mixed = 1 - n2
    q = 1 + (math.sqrt(mixed) if mixed > ROUNDOFF_MIXEDNESS else 0.0)
    if _near_pure(n2, radial):
        return 2 * d2 / q
    return 2 * d2 / q + radial**2 * (1 / (1 - n2) - 1 / q)


# ---------------------------------------------------------------------------
# Paths and derivatives
# ---------------------------------------------------------------------------


def input_derivative(theta: float, phi: float, tag: ParamTag) -> np.ndarray:
    if ParamTag(tag) is ParamTag.THETA:
        ct = math.cos(theta)
        return np.array([math.cos(phi) * ct, -math.sin(phi) * ct, -math.sin(theta)])
    st = math.sin(theta)
    return np.array([-math.sin(phi) * st, -math.cos(phi) * st, 0.0])


def path_bloch(sp: StatePath, stack: AffineChannel | None = None) -> np.ndarray:
    stack = sp.stack() if stack is None else stack
    return stack(bloch_from_angles(sp.theta, sp.phi))


def richardson_central(f: Callable[[float], np.ndarray], x: float, h: float) -> np.ndarray:
    """Central difference at steps ``h`` and ``h/2`` combined by one Richardson step."""

    def central(step: float) -> np.ndarray:
        return (f(x + step) - f(x - step)) / (2 * step)

    return (4 * central(h / 2) - central(h)) / 3


def _angle_map(sp: StatePath, tag: ParamTag, stack: AffineChannel) -> Callable[[float], np.ndarray]:
    if ParamTag(tag) is ParamTag.THETA:
        return lambda x: stack(bloch_from_angles(x, sp.phi))
    return lambda x: stack(bloch_from_angles(sp.theta, x))


def path_derivative(
    sp: StatePath,
    tag: ParamTag,
    mode: str = "analytic",
    h: float = 1e-4,
    stack: AffineChannel | None = None,
) -> np.ndarray:
    """Derivative of the output Bloch vector with respect to ``theta`` or ``phi``.

    ``mode="analytic"`` uses ``A_new @ d(zeta0)``; ``mode="numeric"`` differentiates
    the full map by Richardson-extrapolated central differences with step ``h``.
    """
    stack = sp.stack() if stack is None else stack
    if mode == "analytic":
        return stack.A @ input_derivative(sp.theta, sp.phi, tag)
    if mode == "numeric":
        return richardson_central(_angle_map(sp, tag, stack), sp.angle(tag), h)
    raise ValueError(f"unknown derivative mode {mode!r}")


def generic_info(sp: StatePath, tag: ParamTag, kind: Kind = Kind.FISHER, mode: str = "analytic") -> float:
    stack = sp.stack()
    zeta = path_bloch(sp, stack)
    dzeta = path_derivative(sp, tag, mode, stack=stack)
    fn = fisher_bloch if Kind(kind) is Kind.FISHER else skew_bloch
    return fn(zeta, dzeta)


# ---------------------------------------------------------------------------
# SLD oracle
# ---------------------------------------------------------------------------


def sld_fisher(rho: np.ndarray, drho: np.ndarray) -> float:
    """``tr(rho L^2)`` for the SLD ``L`` solving ``drho = (L rho + rho L) / 2``.

    Eigen-pairs with ``lambda_i + lambda_j`` below the cutoff are skipped; if
    ``drho`` has weight there the state is singular along this direction.
    """
    tol = tolerances()
    lam, vecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    d = vecs.conj().T @ drho @ vecs
    total = 0.0
    for i in range(len(lam)):
        for j in range(len(lam)):
            s = lam[i] + lam[j]
            if s < tol.sld_cutoff:
                if abs(d[i, j]) > 1e-6:
                    raise SingularState(f"drho has weight {abs(d[i, j]):.2e} on the kernel of rho")
                continue
            total += 2 * abs(d[i, j]) ** 2 / s
    return float(total)


def fisher_sld_oracle(sp: StatePath, tag: ParamTag, h: float = 1e-4) -> float:
    stack = sp.stack()
    zeta_of = _angle_map(sp, tag, stack)
    rho = density_from_bloch(path_bloch(sp, stack))
    drho = richardson_central(lambda x: density_from_bloch(zeta_of(x)), sp.angle(tag), h)
    return sld_fisher(rho, drho)


def wy_metric(rho: np.ndarray, drho: np.ndarray) -> float:
    """Wigner-Yanase metric ``4 tr[(d sqrt(rho))^2] = sum 4 |drho_ij|^2 / (sqrt(l_i) + sqrt(l_j))^2``.

    Agrees with :func:`skew_bloch` on paths with ``zeta . dzeta = 0``; along
    radial directions the Bloch form lacks a ``1/|zeta|^2`` weight.
    """
    tol = tolerances()
    lam, vecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    lam = np.where(lam > ROUNDOFF_MIXEDNESS * lam.max(), lam, 0.0)
    root = np.sqrt(lam)
    d = vecs.conj().T @ drho @ vecs
    total = 0.0
    for i in range(len(lam)):
        for j in range(len(lam)):
            s = (root[i] + root[j]) ** 2
            if s < tol.sld_cutoff:
                if abs(d[i, j]) > 1e-6:
                    raise SingularState(f"drho has weight {abs(d[i, j]):.2e} on the kernel of rho")
                continue
            total += 4 * abs(d[i, j]) ** 2 / s
    return float(total)


def skew_wy_oracle(sp: StatePath, tag: ParamTag, h: float = 1e-4) -> float:
    stack = sp.stack()
    zeta_of = _angle_map(sp, tag, stack)
    rho = density_from_bloch(path_bloch(sp, stack))
    drho = richardson_central(lambda x: density_from_bloch(zeta_of(x)), sp.angle(tag), h)
    return wy_metric(rho, drho)


# ---------------------------------------------------------------------------
# Closed forms (transcribed as printed)
# ---------------------------------------------------------------------------


def closed_fisher_unruh(tag: ParamTag, r: float, theta: float) -> float:
    c2 = math.cos(r) ** 2
    if ParamTag(tag) is ParamTag.THETA:
        return c2
    return c2 * math.sin(theta) ** 2


def closed_fisher_qnd(tag: ParamTag, r: float, theta: float, gamma: float, omega0: float) -> float:
    c2 = math.cos(r) ** 2
    if ParamTag(tag) is ParamTag.PHI:
        return math.exp(-gamma * omega0**2 / 2) * c2 * math.sin(theta) ** 2
    g = math.exp(gamma * omega0**2 / 2)
    ct = math.cos(theta)
    num = c2 * (
        2 * (1 + math.cos(2 * r))
        + math.cos(2 * r - theta)
        + 4 * g * (ct - 1)
        - 6 * ct
        + math.cos(2 * r + theta)
    )
    den = 4 * (1 - ct) + 2 * g * (math.cos(2 * r) - 3 + 2 * c2 * ct)
    if abs(den) < 1e-12:
        # removable 0/0 at r = 0 with gamma = 0 or theta = 0; the expression tends to cos^2 r there
        return c2
    return num / den


@dataclass(frozen=True)
class SgadHelpers:
    """Auxiliary combinations ``A+-, B+-, C, D, F`` entering the SGAD closed forms."""

    a_plus: float
    a_minus: float
    b_plus: float
    b_minus: float
    c: float
    d: float
    f: float


def sgad_helpers(r: float, theta: float, phi: float, d: SgadDerived, phi_s: float) -> SgadHelpers:
    c, s2r = math.cos(r), math.sin(r) ** 2
    c2 = c * c
    ch2 = math.cos(theta / 2) ** 2
    sh2 = math.sin(theta / 2) ** 2
    eta = d.p1 * math.sqrt(1 - d.alpha) + d.p2 * math.sqrt((d.mu - 1) * (d.nu - 1))
    kappa = d.p2 * math.sqrt(d.mu * d.nu)
    sp, cp = math.sin(phi), math.cos(phi)
    sps, cps = math.sin(phi - phi_s), math.cos(phi - phi_s)
    return SgadHelpers(
        a_plus=(eta * sp - kappa * sps) * c,
        a_minus=(eta * sp + kappa * sps) * c,
        b_plus=(eta * cp + kappa * cps) * c,
        b_minus=(eta * cp - kappa * cps) * c,
        c=(d.p1 * (d.alpha - 1) + d.p2 * (2 * d.nu - 1)) * c2,
        d=(1 - 2 * d.p1 * d.alpha - 2 * d.p2 * d.mu) * c2 * ch2 - (1 - 2 * d.p2 * d.nu) * (ch2 * s2r + sh2),
        # the printed last term reads "2 sin^2 r theta/2"; cos^2(theta/2) is the reading
        # under which the denominator reduces to 1 - |zeta|^2 without noise
        f=-(d.p1 * d.alpha + d.p2 * d.mu) * c2 * ch2
        + 0.5 * (1 - 2 * d.p2 * d.nu) * (-1 + math.cos(theta) - 2 * s2r * ch2),
    )


def _sgad_denominator(hp: SgadHelpers, theta: float) -> float:
    den = 1 - (hp.f - hp.c * math.cos(theta / 2) ** 2) ** 2 - (hp.a_plus**2 + hp.b_plus**2) * math.sin(theta) ** 2
    if den < tolerances().pure:
        raise SingularState(f"closed-form SGAD denominator {den:.3e} vanishes (pure state)")
    return den


def closed_fisher_sgad(
    tag: ParamTag, r: float, theta: float, phi: float, derived: SgadDerived, phi_s: float
) -> float:
    hp = sgad_helpers(r, theta, phi, derived, phi_s)
    den = _sgad_denominator(hp, theta)
    st, ct = math.sin(theta), math.cos(theta)
    if ParamTag(tag) is ParamTag.THETA:
        num = (
            ct**2 * (hp.a_plus**2 + hp.b_plus**2)
            + st**2 * hp.c**2
            + (hp.c * hp.d + (hp.a_plus + hp.b_plus) * ct) ** 2 * st**2
        )
    else:
        num = st**2 * (hp.a_minus**2 + hp.b_minus**2) + (
            hp.a_plus * hp.b_minus + hp.a_minus * hp.b_plus
        ) ** 2 * st**4
    return num / den


def closed_skew_unruh(tag: ParamTag, r: float, theta: float) -> float:
    c2 = math.cos(r) ** 2
    ch2 = math.cos(theta / 2) ** 2
    w = 1 + ch2 * math.sin(2 * r)
    if ParamTag(tag) is ParamTag.PHI:
        return 2 * c2 * math.sin(theta) ** 2 / w
    return (
        c2
        * (7 + 2 * math.cos(2 * theta) + 8 * ch2 * math.sin(2 * r) + 2 * math.cos(2 * r) * math.sin(theta) ** 2)
        / (4 * w**2)
    )


def closed_skew_qnd(tag: ParamTag, r: float, theta: float, gamma: float, omega0: float) -> float:
    c2, s2 = math.cos(r) ** 2, math.sin(r) ** 2
    ct, st2 = math.cos(theta), math.sin(theta) ** 2
    w = gamma * omega0**2
    h = (s2 - c2 * ct) ** 2 - math.exp(-w / 2) * c2 * st2
    if 1 - h < tolerances().pure:
        raise SingularState(f"closed-form QND skew has 1 - H = {1 - h:.3e}")
    q = 1 + math.sqrt(1 - h)
    if ParamTag(tag) is ParamTag.PHI:
        return 2 * math.exp(-w / 2) * c2 * st2 / q
    g = math.exp(-w) * c2**2 * (ct + math.exp(w / 2) * (s2 - c2 * ct))
    return 2 * c2 * (math.exp(-w / 2) * ct**2 + c2 * st2) / q + g**2 * st2 * (1 / (1 - h) - 1 / q)


def closed_skew_sgad(
    tag: ParamTag, r: float, theta: float, phi: float, derived: SgadDerived, phi_s: float
) -> float:
    hp = sgad_helpers(r, theta, phi, derived, phi_s)
    den = _sgad_denominator(hp, theta)
    q = 1 + math.sqrt(den)
    st, ct = math.sin(theta), math.cos(theta)
    ab_plus = hp.a_plus**2 + hp.b_plus**2
    if ParamTag(tag) is ParamTag.THETA:
        first = 2 * (ct**2 * ab_plus + hp.c**2 * st**2) / q
        second = (hp.c * hp.d * st + ab_plus * st * ct) ** 2
    else:
        first = 2 * (hp.a_minus**2 + hp.b_minus**2) * st**2 / q
        second = (hp.a_plus * hp.b_minus + hp.a_minus * hp.b_plus) ** 2 * st**4
    return first + second * (1 / den - 1 / q)


def closed_info(sp: StatePath, tag: ParamTag, kind: Kind = Kind.FISHER) -> float:
    """Dispatch to the printed closed form matching the path's regime."""
    fisher = Kind(kind) is Kind.FISHER
    if sp.noise is None:
        fn = closed_fisher_unruh if fisher else closed_skew_unruh
        return fn(tag, sp.r, sp.theta)
    if isinstance(sp.noise, QndParams):
        fn = closed_fisher_qnd if fisher else closed_skew_qnd
        return fn(tag, sp.r, sp.theta, qnd_gamma(sp.noise), sp.noise.omega0)
    fn = closed_fisher_sgad if fisher else closed_skew_sgad
    return fn(tag, sp.r, sp.theta, sp.phi, sgad_derived(sp.noise), sp.noise.phi_s)


# ---------------------------------------------------------------------------
# Consistency report
# ---------------------------------------------------------------------------


@dataclass
class ConsistencyReport:
    path: StatePath
    tag: ParamTag
    kind: Kind
    results: dict[Method, InfoResult] = field(default_factory=dict)
    errors: dict[Method, str] = field(default_factory=dict)
    residuals: dict[tuple[Method, Method], float] = field(default_factory=dict)

    def value(self, method: Method) -> float:
        return self.results[method].value

    def residual(self, a: Method, b: Method) -> float:
        key = (a, b) if (a, b) in self.residuals else (b, a)
        return self.residuals[key]

    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


def consistency_report(sp: StatePath, tag: ParamTag, kind: Kind = Kind.FISHER) -> ConsistencyReport:
    """Evaluate every applicable route and all pairwise residuals; never raises on disagreement."""
    kind = Kind(kind)
    tag = ParamTag(tag)
    routes: dict[Method, Callable[[], float]] = {
        Method.CLOSED_FORM: lambda: closed_info(sp, tag, kind),
        Method.GENERIC_ANALYTIC: lambda: generic_info(sp, tag, kind, "analytic"),
        Method.GENERIC_NUMERIC: lambda: generic_info(sp, tag, kind, "numeric"),
    }
    if kind is Kind.FISHER:
        routes[Method.SLD_ORACLE] = lambda: fisher_sld_oracle(sp, tag)

    report = ConsistencyReport(sp, tag, kind)
    raw: dict[Method, float] = {}
    for method, fn in routes.items():
        try:
            raw[method] = float(fn())
        except (ArithmeticError, ValueError) as exc:
            report.errors[method] = f"{type(exc).__name__}: {exc}"

    methods = list(raw)
    for i, a in enumerate(methods):
        for b in methods[i + 1 :]:
            report.residuals[(a, b)] = abs(raw[a] - raw[b])

    truth = Method.GENERIC_ANALYTIC
    for method, v in raw.items():
        oracle = Method.SLD_ORACLE if method is truth else truth
        res = abs(v - raw[oracle]) if oracle in raw else None
        report.results[method] = InfoResult(max(v, 0.0), method, v, res)
    return report
