"""Parameter grids, figure presets and qualitative trend checks."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from udqubit.channels import QND_MODES, QndParams, SgadParams
from udqubit.errors import UdqError, UnknownFigure
from udqubit.qcore import Tolerances, configure_tolerances, tolerances
from udqubit.qfi import Kind, ParamTag, StatePath, closed_info, generic_info

QUANTITIES: dict[str, tuple[Kind, ParamTag]] = {
    "Ftheta": (Kind.FISHER, ParamTag.THETA),
    "Fphi": (Kind.FISHER, ParamTag.PHI),
    "Stheta": (Kind.SKEW, ParamTag.THETA),
    "Sphi": (Kind.SKEW, ParamTag.PHI),
}
COLUMN_NAMES = {"Ftheta": "F_theta", "Fphi": "F_phi", "Stheta": "S_theta", "Sphi": "S_phi"}
REGIMES = ("Unruh", "UnruhQnd", "UnruhSgad")
ROUTES = ("closed", "generic", "both")

ANGLE_PARAMS = ("r", "theta", "phi")
QND_PARAMS = ("t", "T", "s", "a", "omega0", "omega_c", "gamma0")
SGAD_PARAMS = ("t", "T", "s", "phi_s", "omega0", "gamma0")
REGIME_PARAMS = {
    "Unruh": ANGLE_PARAMS,
    "UnruhQnd": ANGLE_PARAMS + QND_PARAMS,
    "UnruhSgad": ANGLE_PARAMS + SGAD_PARAMS,
}
REQUIRED_PARAMS = {
    "Unruh": ("r",),
    "UnruhQnd": ("r", "t", "T", "s"),
    "UnruhSgad": ("r", "t", "T", "s"),
}
# input angles used by every caption that fixes them
DEFAULT_ANGLES = {"theta": math.pi / 4, "phi": math.pi / 4}

DEFAULT_RANGES = {
    "r": (0.0, math.pi / 4),
    "theta": (0.0, 2 * math.pi),
    "t": (0.0, 10.0),
    "T": (0.0, 3.0),
    "s": (-2.0, 2.0),
}
DEFAULT_RESOLUTION = 60


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class GridSpec:
    axes: tuple[Axis, ...]
    fixed: Mapping[str, float]
    quantity: str
    regime: str
    route: str = "generic"
    qnd_mode: str = "paper"

    def __post_init__(self) -> None:
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "fixed", MappingProxyType(dict(self.fixed)))
        if not 1 <= len(self.axes) <= 2:
            raise ValueError("a grid needs one or two axes")
        if any(ax.count < 2 for ax in self.axes):
            raise ValueError("every axis needs at least two points")
        names = [ax.name for ax in self.axes]
        if len(set(names)) != len(names) or set(names) & set(self.fixed):
            raise ValueError("axis names must be distinct and disjoint from fixed names")
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}")
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.route not in ROUTES:
            raise ValueError(f"unknown route {self.route!r}")
        if self.qnd_mode not in QND_MODES:
            raise ValueError(f"unknown QND mode {self.qnd_mode!r}")
        allowed = set(REGIME_PARAMS[self.regime])
        unknown = (set(names) | set(self.fixed)) - allowed
        if unknown:
            raise ValueError(f"parameters {sorted(unknown)} do not apply to regime {self.regime}")
        missing = set(REQUIRED_PARAMS[self.regime]) - set(names) - set(self.fixed)
        if missing:
            raise ValueError(f"regime {self.regime} needs {sorted(missing)}")

    def __reduce__(self):
        # mappingproxy does not pickle; worker processes get a plain dict
        return (GridSpec, (self.axes, dict(self.fixed), self.quantity, self.regime, self.route, self.qnd_mode))

    @property
    def axis_names(self) -> tuple[str, ...]:
        return tuple(ax.name for ax in self.axes)

    def points(self) -> Iterable[tuple[float, ...]]:
        """Grid points in row-major order (first axis slowest)."""
        return itertools.product(*(map(float, ax.values()) for ax in self.axes))

    def with_route(self, route: str) -> "GridSpec":
        return GridSpec(self.axes, self.fixed, self.quantity, self.regime, route, self.qnd_mode)

    def with_qnd_mode(self, mode: str) -> "GridSpec":
        return GridSpec(self.axes, self.fixed, self.quantity, self.regime, self.route, mode)


@dataclass(frozen=True)
class SweepRow:
    point: tuple[float, ...]
    values: dict[str, float | None] = field(default_factory=dict)
    residual: float | None = None
    flag: str = ""


def make_path(regime: str, params: Mapping[str, float], qnd_mode: str = "paper") -> StatePath:
    """Build a :class:`StatePath` from flat parameter names; unset angles default to pi/4."""
    p = {**DEFAULT_ANGLES, **params}
    noise = None
    if regime == "UnruhQnd":
        noise = QndParams(**{k: p[k] for k in QND_PARAMS if k in p})
    elif regime == "UnruhSgad":
        noise = SgadParams(**{k: p[k] for k in SGAD_PARAMS if k in p})
    elif regime != "Unruh":
        raise ValueError(f"unknown regime {regime!r}")
    return StatePath(p["r"], p["theta"], p["phi"], noise, qnd_mode)


def evaluate_point(g: GridSpec, point: Sequence[float]) -> SweepRow:
    params = dict(g.fixed)
    params.update(zip(g.axis_names, point))
    kind, tag = QUANTITIES[g.quantity]
    routes = ("closed", "generic") if g.route == "both" else (g.route,)
    values: dict[str, float | None] = {}
    flags = []
    try:
        sp = make_path(g.regime, params, g.qnd_mode)
    except (UdqError, ArithmeticError, ValueError) as exc:
        return SweepRow(tuple(point), {r: None for r in routes}, None, type(exc).__name__)
    for route in routes:
        try:
            v = closed_info(sp, tag, kind) if route == "closed" else generic_info(sp, tag, kind)
            if not math.isfinite(v):
                raise ArithmeticError("non-finite value")
            values[route] = float(v)
        except (UdqError, ArithmeticError, ValueError) as exc:
            values[route] = None
            flags.append(f"{route}:{type(exc).__name__}")
    residual = None
    if g.route == "both" and values["closed"] is not None and values["generic"] is not None:
        residual = abs(values["closed"] - values["generic"])
    return SweepRow(tuple(point), values, residual, ";".join(flags))


def _evaluate_chunk(args: tuple[GridSpec, list[tuple[float, ...]]]) -> list[SweepRow]:
    g, pts = args
    return [evaluate_point(g, p) for p in pts]


def _init_worker(tol: Tolerances) -> None:
    configure_tolerances(tol)


def run_sweep(g: GridSpec, workers: int = 1) -> list[SweepRow]:
    """Evaluate ``g`` at every grid point; output order is the grid order for any worker count."""
    pts = list(g.points())
    if workers <= 1:
        return [evaluate_point(g, p) for p in pts]
    size = max(1, math.ceil(len(pts) / (4 * workers)))
    chunks = [(g, pts[i : i + size]) for i in range(0, len(pts), size)]
    with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(tolerances(),)) as pool:
        return [row for chunk in pool.map(_evaluate_chunk, chunks) for row in chunk]


# ---------------------------------------------------------------------------
# Figure presets
# ---------------------------------------------------------------------------

_QND_BASE = {"theta": math.pi / 4, "phi": math.pi / 4, "a": 0.0, "omega0": 1.0, "omega_c": 100.0, "gamma0": 0.1}
_SGAD_BASE = {"theta": math.pi / 4, "phi": math.pi / 4, "phi_s": 0.0, "omega0": 0.1, "gamma0": 0.1}

# id -> (regime, axes, fixed, (quantity of panel a, quantity of panel b))
_FIGURES: dict[int, tuple[str, tuple[str, ...], dict[str, float], tuple[str, str]]] = {
    2: ("UnruhQnd", ("t", "r"), {**_QND_BASE, "T": 0.5, "s": 0.5}, ("Ftheta", "Fphi")),
    3: ("UnruhQnd", ("T", "s"), {**_QND_BASE, "r": math.pi / 8, "t": 2.0}, ("Ftheta", "Fphi")),
    4: ("UnruhSgad", ("t", "r"), {**_SGAD_BASE, "T": 0.5, "s": 0.5}, ("Ftheta", "Fphi")),
    5: ("UnruhSgad", ("T", "s"), {**_SGAD_BASE, "r": math.pi / 8, "t": 2.0}, ("Ftheta", "Fphi")),
    6: ("Unruh", ("r", "theta"), {}, ("Stheta", "Sphi")),
    7: ("UnruhQnd", ("t", "r"), {**_QND_BASE, "T": 0.5, "s": 0.5}, ("Stheta", "Sphi")),
    8: ("UnruhQnd", ("T", "s"), {**_QND_BASE, "r": math.pi / 8, "t": 2.0}, ("Stheta", "Sphi")),
    9: ("UnruhSgad", ("t", "r"), {**_SGAD_BASE, "T": 0.5, "s": 0.5}, ("Stheta", "Sphi")),
    10: ("UnruhSgad", ("T", "s"), {**_SGAD_BASE, "r": math.pi / 8, "t": 2.0}, ("Stheta", "Sphi")),
}
FIGURE_IDS = tuple(range(1, 11))


def figure_panels(fig: int) -> tuple[str, ...]:
    if fig not in FIGURE_IDS:
        raise UnknownFigure(fig)
    return ("a", "b")


def _axis(name: str, resolution: int, ranges: Mapping[str, tuple[float, float]] | None) -> Axis:
    lo, hi = (ranges or {}).get(name, DEFAULT_RANGES[name])
    return Axis(name, lo, hi, resolution)


def figure_preset(
    fig: int,
    panel: str = "a",
    resolution: int = DEFAULT_RESOLUTION,
    ranges: Mapping[str, tuple[float, float]] | None = None,
) -> GridSpec:
    """Grid reproducing one panel of a figure, with the caption's constants as fixed values."""
    if fig not in FIGURE_IDS:
        raise UnknownFigure(fig)
    if panel not in ("a", "b"):
        raise UnknownFigure(f"{fig}{panel}")
    if fig == 1:
        if panel == "a":
            return GridSpec((_axis("r", resolution, ranges),), {}, "Ftheta", "Unruh")
        return GridSpec((_axis("r", resolution, ranges), _axis("theta", resolution, ranges)), {}, "Fphi", "Unruh")
    regime, axes, fixed, quantities = _FIGURES[fig]
    quantity = quantities[0] if panel == "a" else quantities[1]
    return GridSpec(tuple(_axis(n, resolution, ranges) for n in axes), fixed, quantity, regime)


def all_presets(resolution: int = DEFAULT_RESOLUTION) -> list[tuple[str, GridSpec]]:
    return [(f"{fig}{panel}", figure_preset(fig, panel, resolution)) for fig in FIGURE_IDS for panel in figure_panels(fig)]


# ---------------------------------------------------------------------------
# Trend checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrendResult:
    check_id: str
    passed: bool
    hard: bool
    violation: float
    detail: str


def _series(regime: str, quantity: str, fixed: Mapping[str, float], axis: str, values: Iterable[float]) -> np.ndarray:
    kind, tag = QUANTITIES[quantity]
    out = []
    for v in values:
        out.append(generic_info(make_path(regime, {**fixed, axis: float(v)}), tag, kind))
    return np.array(out)


def _max_increase(y: np.ndarray) -> float:
    return float(max(np.max(np.diff(y)), 0.0))


def trend_checks(resolution: int = DEFAULT_RESOLUTION, slack: float = 1e-12) -> list[TrendResult]:
    """Evaluate the qualitative claims made about the figures on their grids.

    ``hard`` trends gate the verification suite; the others are recorded.
    """
    results: list[TrendResult] = []
    t_axis = np.linspace(0.0, 10.0, resolution)
    T_axis = np.linspace(0.0, 3.0, resolution)
    r_axis = np.linspace(0.0, math.pi / 4, resolution)

    y = _series("Unruh", "Ftheta", {}, "r", r_axis)
    worst = float(np.max(np.diff(y)))
    results.append(
        TrendResult("unruh_ftheta_decreasing_in_r", worst < 0, True, max(worst, 0.0), f"max step {worst:.3e}")
    )

    fixed2 = _FIGURES[2][2]
    y = _series("UnruhQnd", "Ftheta", {**fixed2, "r": 0.1}, "t", t_axis)
    rel = float((y.max() - y.min()) / y.max())
    results.append(
        TrendResult("qnd_ftheta_stable_r0.1", rel < 0.05, True, rel, f"relative variation {rel:.4f} over t in [0,10]")
    )

    for fig, name in ((2, "qnd"), (4, "sgad")):
        regime, _, fixed, _ = _FIGURES[fig]
        worst = 0.0
        for r in r_axis:
            worst = max(worst, _max_increase(_series(regime, "Fphi", {**fixed, "r": float(r)}, "t", t_axis)))
        results.append(
            TrendResult(f"{name}_fphi_nonincreasing_in_t", worst <= slack, True, worst, f"max increase {worst:.3e}")
        )

    for fig, name in ((3, "qnd"), (5, "sgad")):
        regime, _, fixed, _ = _FIGURES[fig]
        worst = 0.0
        for q in ("Ftheta", "Fphi"):
            worst = max(worst, _max_increase(_series(regime, q, {**fixed, "s": 0.0}, "T", T_axis)))
        results.append(
            TrendResult(f"{name}_fisher_nonincreasing_in_T_s0", worst <= slack, True, worst, f"max increase {worst:.3e}")
        )

    # soft: QND F_theta decreasing in time for every r on the figure-2 grid
    regime, _, fixed, _ = _FIGURES[2]
    worst = 0.0
    for r in r_axis:
        worst = max(worst, _max_increase(_series(regime, "Ftheta", {**fixed, "r": float(r)}, "t", t_axis)))
    results.append(
        TrendResult("qnd_ftheta_nonincreasing_in_t", worst <= slack, False, worst, f"max increase {worst:.3e}")
    )

    # soft: SGAD squeezing at T = 1 raises Fisher information and levels off beyond |s| = 1
    regime, _, fixed, _ = _FIGURES[5]
    s_axis = np.linspace(-2.0, 2.0, 4 * (resolution // 4) + 1)
    for q in ("Ftheta", "Fphi"):
        y = _series(regime, q, {**fixed, "T": 1.0}, "s", s_axis)
        y0 = y[len(y) // 2]
        gain = float(min(y[0], y[-1]) - y0)
        slope = np.abs(np.gradient(y, s_axis))
        outer = np.abs(s_axis) > 1
        right = slope[outer & (s_axis > 0)]
        left = slope[outer & (s_axis < 0)][::-1]
        levelling = bool(np.all(np.diff(right) <= slack) and np.all(np.diff(left) <= slack))
        ok = gain > 0 and levelling
        results.append(
            TrendResult(
                f"sgad_{q.lower()}_squeezing_T1",
                ok,
                False,
                max(-gain, 0.0),
                f"F(|s|=2) - F(0) = {gain:.4e}; |dF/ds| decreasing beyond |s|=1: {levelling}",
            )
        )
    return results
