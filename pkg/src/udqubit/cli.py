"""Command-line front end: ``udq figure|sweep|check|eval``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from udqubit.channels import QND_MODES
from udqubit.errors import UdqError, UnknownFigure
from udqubit.qcore import Tolerances, configure_tolerances, tolerances
from udqubit.qfi import Kind, closed_info, fisher_sld_oracle, generic_info
from udqubit.sweep import (
    COLUMN_NAMES,
    DEFAULT_RESOLUTION,
    QUANTITIES,
    REGIME_PARAMS,
    REQUIRED_PARAMS,
    ROUTES,
    Axis,
    GridSpec,
    SweepRow,
    figure_panels,
    figure_preset,
    make_path,
    run_sweep,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

REGIME_ALIASES = {"unruh": "Unruh", "qnd": "UnruhQnd", "sgad": "UnruhSgad"}
# figure constants used by `eval` for anything not given on the command line
EVAL_DEFAULTS = {
    "UnruhQnd": {"a": 0.0, "omega0": 1.0, "omega_c": 100.0, "gamma0": 0.1},
    "UnruhSgad": {"phi_s": 0.0, "omega0": 0.1, "gamma0": 0.1},
}
REPORT_NAME = "check_report.txt"


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    output_dir: Path = Path(".")
    format: str = "csv"
    tolerances: Tolerances = field(default_factory=Tolerances)
    resolution: int = DEFAULT_RESOLUTION
    qnd_mode: str = "paper"
    route: str | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.format != "csv":
            raise UsageError(f"unsupported format {self.format!r}")
        if self.resolution < 2:
            raise UsageError("resolution must be at least 2")
        if self.qnd_mode not in QND_MODES:
            raise UsageError(f"qnd_mode must be one of {QND_MODES}")
        if self.route is not None and self.route not in ROUTES:
            raise UsageError(f"route must be one of {ROUTES}")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")


# ---------------------------------------------------------------------------
# Flat key = value files
# ---------------------------------------------------------------------------


def read_kv_lines(text: str) -> list[tuple[str, str]]:
    """Parse ``key = value`` lines; ``#`` starts a comment and repeated keys are kept in order."""
    pairs = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"line {n}: expected 'key = value', got {raw!r}")
        pairs.append((key.strip(), value.strip()))
    return pairs


def _float(key: str, value: str) -> float:
    try:
        v = float(value)
    except ValueError:
        raise UsageError(f"{key}: not a number: {value!r}") from None
    if not math.isfinite(v):
        raise UsageError(f"{key}: must be finite")
    return v


def _int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"{key}: not an integer: {value!r}") from None


def _tolerance_overrides(items: Sequence[str]) -> dict[str, float]:
    names = {f.name for f in dataclasses.fields(Tolerances)}
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise UsageError(f"bad tolerance override {item!r}; keys: {', '.join(sorted(names))}")
        v = _float(key, value)
        if v <= 0:
            raise UsageError(f"tolerance {key} must be positive")
        out[key] = v
    return out


def build_config(args: argparse.Namespace, environ: dict[str, str] | None = None) -> CliConfig:
    """Merge defaults, ``UDQ_OUT``, the config file and command-line flags (later wins)."""
    environ = os.environ if environ is None else environ
    settings: dict[str, object] = {}
    tol: dict[str, float] = {}
    if environ.get("UDQ_OUT"):
        settings["output_dir"] = Path(environ["UDQ_OUT"])
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}") from None
        for key, value in read_kv_lines(text):
            if key in ("out", "output_dir"):
                settings["output_dir"] = Path(value)
            elif key in ("format", "qnd_mode", "route"):
                settings[key] = value
            elif key in ("resolution", "workers"):
                settings[key] = _int(key, value)
            elif key.startswith("tolerance."):
                tol.update(_tolerance_overrides([f"{key[len('tolerance.'):]}={value}"]))
            else:
                raise UsageError(f"unknown config key {key!r}")
    for name, attr in (("out", "output_dir"), ("qnd_mode", "qnd_mode"), ("route", "route"),
                       ("resolution", "resolution"), ("workers", "workers")):
        v = getattr(args, name, None)
        if v is not None:
            settings[attr] = Path(v) if attr == "output_dir" else v
    tol.update(_tolerance_overrides(args.tolerance or []))
    return CliConfig(tolerances=dataclasses.replace(Tolerances(), **tol), **settings)


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------


def _fmt(v: float | None) -> str:
    return "" if v is None else format(v, ".17g")


def rows_to_csv(g: GridSpec, rows: Sequence[SweepRow]) -> str:
    col = COLUMN_NAMES[g.quantity]
    header = list(g.axis_names)
    if g.route == "both":
        header += [f"{col}_closed", f"{col}_generic", "residual"]
    else:
        header.append(col)
    flagged = any(row.flag for row in rows)
    if flagged:
        header.append("flag")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        out = [_fmt(x) for x in row.point]
        if g.route == "both":
            out += [_fmt(row.values["closed"]), _fmt(row.values["generic"]), _fmt(row.residual)]
        else:
            out.append(_fmt(row.values[g.route]))
        if flagged:
            out.append(row.flag)
        w.writerow(out)
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _figure_filename(fig: int, panel: str) -> str:
    # figure 1 panel a is the single-curve figure; keep the bare name for it
    return f"figure_{fig}.csv" if (fig, panel) == (1, "a") else f"figure_{fig}{panel}.csv"


def _grid(g: GridSpec, cfg: CliConfig, default_route: str = "generic") -> GridSpec:
    return g.with_route(cfg.route or default_route).with_qnd_mode(cfg.qnd_mode)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_figure(fig: int, cfg: CliConfig, panels: Sequence[str] | None = None) -> int:
    for panel in panels or figure_panels(fig):
        g = _grid(figure_preset(fig, panel, cfg.resolution), cfg)
        path = cfg.output_dir / _figure_filename(fig, panel)
        _write(path, rows_to_csv(g, run_sweep(g, cfg.workers)))
        print(path)
    return EXIT_OK


def parse_gridspec(text: str) -> GridSpec:
    """Grid file: ``regime``, ``quantity``, optional ``route``/``qnd_mode``,
    one or two ``axis = name start stop count`` lines, and fixed parameters as ``name = value``."""
    meta: dict[str, str] = {}
    axes: list[Axis] = []
    fixed: dict[str, float] = {}
    for key, value in read_kv_lines(text):
        if key == "axis":
            parts = value.split()
            if len(parts) != 4:
                raise UsageError(f"axis needs 'name start stop count', got {value!r}")
            name = parts[0]
            axes.append(Axis(name, _float(name, parts[1]), _float(name, parts[2]), _int(name, parts[3])))
        elif key in ("regime", "quantity", "route", "qnd_mode"):
            meta[key] = value
        else:
            fixed[key] = _float(key, value)
    for key in ("regime", "quantity"):
        if key not in meta:
            raise UsageError(f"grid file needs '{key} = ...'")
    regime = REGIME_ALIASES.get(meta["regime"].lower(), meta["regime"])
    try:
        return GridSpec(
            tuple(axes), fixed, meta["quantity"], regime, meta.get("route", "generic"), meta.get("qnd_mode", "paper")
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_sweep(path: Path, cfg: CliConfig) -> int:
    try:
        text = path.read_text()
    except OSError as exc:
        print(f"error: cannot read grid file: {exc}", file=sys.stderr)
        return EXIT_IO
    g = parse_gridspec(text)
    if cfg.route is not None:
        g = g.with_route(cfg.route)
    if cfg.qnd_mode != "paper":
        g = g.with_qnd_mode(cfg.qnd_mode)
    out = cfg.output_dir / f"{path.stem}.csv"
    _write(out, rows_to_csv(g, run_sweep(g, cfg.workers)))
    print(out)
    return EXIT_OK


def cmd_check(cfg: CliConfig) -> int:
    from udqubit.verify import run_checks

    findings = run_checks(cfg.resolution, cfg.qnd_mode, max(cfg.workers, 2))
    report = "".join(f.line() + "\n" for f in findings)
    sys.stdout.write(report)
    _write(cfg.output_dir / REPORT_NAME, report)
    failed = sum(f.level == "FAIL" for f in findings)
    soft = sum(f.level == "SOFT" for f in findings)
    print(f"summary: {len(findings)} findings, {failed} hard failures, {soft} soft")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_eval(regime: str, quantity: str, params: dict[str, float], cfg: CliConfig) -> int:
    regime = REGIME_ALIASES.get(regime.lower(), regime)
    if regime not in REGIME_PARAMS:
        raise UsageError(f"unknown regime {regime!r}; use unruh, qnd or sgad")
    if quantity not in QUANTITIES:
        raise UsageError(f"unknown quantity {quantity!r}; use {', '.join(QUANTITIES)}")
    missing = [p for p in REQUIRED_PARAMS[regime] if p not in params]
    if missing:
        raise UsageError(f"{regime} needs --{' --'.join(missing)}")
    extra = set(params) - set(REGIME_PARAMS[regime])
    if extra:
        raise UsageError(f"parameters {sorted(extra)} do not apply to {regime}")
    try:
        sp = make_path(regime, {**EVAL_DEFAULTS.get(regime, {}), **params}, cfg.qnd_mode)
        sp.stack()
    except ValueError as exc:
        raise UsageError(f"{type(exc).__name__}: {exc}") from None
    kind, tag = QUANTITIES[quantity]
    route = cfg.route or "closed"
    generic = generic_info(sp, tag, kind)
    if route == "generic":
        value = generic
        residual = abs(generic - fisher_sld_oracle(sp, tag)) if kind is Kind.FISHER else None
    else:
        value = closed_info(sp, tag, kind)
        residual = abs(value - generic)
    print(f"{value!r} {route} {'-' if residual is None else format(residual, '.3e')}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

EVAL_FLAGS = {
    "r": "r", "theta": "theta", "phi": "phi", "t": "t", "T": "T", "s": "s", "a": "a",
    "omega0": "omega0", "omegac": "omega_c", "gamma0": "gamma0", "phis": "phi_s",
}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    p.add_argument("--out", help="output directory (default: $UDQ_OUT or .)")
    p.add_argument("--qnd-mode", dest="qnd_mode", choices=QND_MODES)
    p.add_argument("--route", choices=ROUTES)
    p.add_argument("--tolerance", action="append", metavar="KEY=VAL", help="override a tolerance (repeatable)")
    p.add_argument("--config", help="flat 'key = value' config file")
    p.add_argument("--resolution", type=int, help="grid points per axis")
    p.add_argument("--workers", type=int, help="worker processes for sweeps")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="udq", description=__doc__.splitlines()[0], parents=[common], allow_abbrev=False
    )
    sub = parser.add_subparsers(dest="command", required=True)
    # subcommands accept the global flags too; SUPPRESS keeps a pre-command value
    sub_common = _common()
    for action in sub_common._actions:
        action.default = argparse.SUPPRESS

    fig = sub.add_parser("figure", parents=[sub_common], allow_abbrev=False, help="write the CSV data of a figure")
    fig.add_argument("id", type=int)
    fig.add_argument("--panel", choices=("a", "b"))

    sw = sub.add_parser("sweep", parents=[sub_common], allow_abbrev=False, help="run a sweep described by a grid file")
    sw.add_argument("gridspec", type=Path)

    sub.add_parser("check", parents=[sub_common], allow_abbrev=False, help="run the verification suite")

    ev = sub.add_parser("eval", parents=[sub_common], allow_abbrev=False, help="evaluate one quantity at one point")
    ev.add_argument("regime")
    ev.add_argument("quantity")
    for flag, dest in EVAL_FLAGS.items():
        ev.add_argument(f"--{flag}", dest=f"p_{dest}", type=float)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    previous = tolerances()
    try:
        cfg = build_config(args)
        configure_tolerances(cfg.tolerances)
        if args.command == "figure":
            return cmd_figure(args.id, cfg, [args.panel] if args.panel else None)
        if args.command == "sweep":
            return cmd_sweep(args.gridspec, cfg)
        if args.command == "check":
            return cmd_check(cfg)
        params = {k[2:]: v for k, v in vars(args).items() if k.startswith("p_") and v is not None}
        return cmd_eval(args.regime, args.quantity, params, cfg)
    except UnknownFigure as exc:
        print(f"error: unknown figure {exc.args[0]!r}; figures are 1-10", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except UdqError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    finally:
        configure_tolerances(previous)


if __name__ == "__main__":
    sys.exit(main())
