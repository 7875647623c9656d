import math
import pickle

import pytest

from udqubit.channels import QndParams, SgadParams
from udqubit.errors import UnknownFigure
from udqubit.qfi import Kind, ParamTag, StatePath, generic_info
from udqubit.sweep import (
    FIGURE_IDS,
    Axis,
    GridSpec,
    all_presets,
    evaluate_point,
    figure_preset,
    make_path,
    run_sweep,
    trend_checks,
)


def small_grid(**kw):
    base = dict(
        axes=(Axis("T", 0.0, 3.0, 4), Axis("s", -2.0, 2.0, 3)),
        fixed={"r": math.pi / 8, "t": 2.0},
        quantity="Ftheta",
        regime="UnruhSgad",
    )
    base.update(kw)
    return GridSpec(**base)


@pytest.mark.parametrize(
    "kw",
    [
        {"axes": ()},
        {"axes": (Axis("T", 0, 1, 2), Axis("s", 0, 1, 2), Axis("t", 0, 1, 2))},
        {"axes": (Axis("T", 0, 1, 1),)},
        {"axes": (Axis("T", 0, 1, 2), Axis("T", 0, 1, 2))},
        {"axes": (Axis("r", 0, 1, 2),)},  # also fixed
        {"quantity": "Fxi"},
        {"regime": "Qnd"},
        {"route": "fast"},
        {"qnd_mode": "other"},
        {"fixed": {"r": 0.1, "t": 2.0, "omega_c": 3.0}},  # QND-only parameter
        {"fixed": {"r": 0.1}},  # t missing
    ],
)
def test_gridspec_rejects(kw):
    with pytest.raises(ValueError):
        small_grid(**kw)


def test_points_are_row_major():
    pts = list(small_grid().points())
    assert len(pts) == 12
    assert pts[:4] == [(0.0, -2.0), (0.0, 0.0), (0.0, 2.0), (1.0, -2.0)]


def test_gridspec_is_immutable_and_picklable():
    g = small_grid()
    with pytest.raises(TypeError):
        g.fixed["r"] = 0.0
    h = pickle.loads(pickle.dumps(g))
    assert h == g or (h.axes == g.axes and dict(h.fixed) == dict(g.fixed))


def test_make_path_defaults():
    sp = make_path("UnruhQnd", {"r": 0.1, "t": 1.0, "T": 0.5, "s": 0.2})
    assert sp.theta == sp.phi == math.pi / 4
    assert sp.noise == QndParams(1.0, 0.5, 0.2)
    assert make_path("Unruh", {"r": 0.2}).noise is None
    with pytest.raises(ValueError):
        make_path("Bogus", {"r": 0.1})


def test_evaluate_point_both_routes():
    row = evaluate_point(small_grid(route="both"), (0.5, 0.5))
    assert set(row.values) == {"closed", "generic"}
    assert row.residual == pytest.approx(abs(row.values["closed"] - row.values["generic"]), abs=0)
    sp = StatePath(math.pi / 8, math.pi / 4, math.pi / 4, SgadParams(2.0, 0.5, 0.5))
    assert row.values["generic"] == generic_info(sp, ParamTag.THETA, Kind.FISHER)


def test_evaluate_point_flags_domain_errors():
    g = GridSpec((Axis("r", 0.0, 2.0, 2),), {}, "Ftheta", "Unruh")
    row = evaluate_point(g, (2.0,))
    assert row.values == {"generic": None} and row.flag


def test_parallel_sweep_is_identical():
    g = small_grid(route="both")
    assert run_sweep(g) == run_sweep(g, workers=3)


def test_presets_cover_every_figure():
    names = [n for n, _ in all_presets(resolution=3)]
    assert names == [f"{f}{p}" for f in FIGURE_IDS for p in "ab"]
    assert figure_preset(1).axis_names == ("r",)
    assert figure_preset(1, "b").axis_names == ("r", "theta")
    g = figure_preset(5, "b", resolution=7, ranges={"T": (0.1, 0.2)})
    assert g.quantity == "Fphi" and g.axes[0] == Axis("T", 0.1, 0.2, 7)
    assert g.fixed["omega0"] == 0.1 and g.fixed["t"] == 2.0


@pytest.mark.parametrize("fig, panel", [(0, "a"), (11, "a"), (2, "c")])
def test_unknown_figure(fig, panel):
    with pytest.raises(UnknownFigure):
        figure_preset(fig, panel)


def test_hard_trends_hold():
    results = trend_checks(resolution=24)
    hard = [r for r in results if r.hard]
    assert len(hard) == 6
    assert all(r.passed for r in hard), [r.detail for r in hard if not r.passed]
