import numpy as np
import pytest
from matplotlib.collections import LineCollection, PolyCollection

from lswplot.cli import main
from lswplot.curvefile import CurveFile, RecordFile, read_curve
from lswplot.render import build_campaign_figure, build_exclusion_figure, render_exclusion


def make_curve(bound_kind="inverse_coupling_ev", experiment="demo", target="axion",
               gap=True):
    masses = np.array([1e-5, 1e-4, 1e-3, 3e-3, 1e-2])
    bounds = np.array([9e14, 8.9e14, 8e14, np.nan if gap else 5e14, 2e14])
    if bound_kind == "mixing":
        bounds = np.where(np.isnan(bounds), np.nan, 1e-6 * bounds / 9e14)
    constrained = ~np.isnan(bounds)
    return CurveFile(metadata={"experiment": experiment, "target": target,
                               "bound_kind": bound_kind},
                     masses_ev=masses, bounds=bounds, constrained=constrained)


def make_record(counts=None):
    n = 10
    signal = np.zeros(n, dtype=int) if counts is None else np.asarray(counts, dtype=int)
    return RecordFile(metadata={"experiment": "demo", "total_signal": str(signal.sum()),
                                "total_dark": "0"},
                      pulse=np.arange(n), field_on=np.arange(n) < 6,
                      lambda_expected=np.zeros(n), signal_counts=signal,
                      dark_counts=np.zeros(n, dtype=int))


# ---------------------------------------------------------------------------
# Exclusion figures
# ---------------------------------------------------------------------------

def test_figure_has_shading_and_gap():
    fig = build_exclusion_figure([make_curve()])
    ax = fig.axes[0]
    fills = [c for c in ax.collections if isinstance(c, PolyCollection)]
    assert fills, "expected a shaded exclusion region"
    ydata = ax.lines[0].get_ydata()
    assert np.isnan(ydata).sum() == 1  # the node gap survives as a line break
    assert ax.get_xscale() == "log" and ax.get_yscale() == "log"


def test_inverse_coupling_shades_below_and_mixing_above():
    fig = build_exclusion_figure([make_curve(bound_kind="inverse_coupling_ev")])
    fill = [c for c in fig.axes[0].collections if isinstance(c, PolyCollection)][0]
    below = fill.get_paths()[0].vertices[:, 1].min()
    assert below < 2e14  # region extends under the curve

    fig = build_exclusion_figure([make_curve(bound_kind="mixing")])
    fill = [c for c in fig.axes[0].collections if isinstance(c, PolyCollection)][0]
    above = fill.get_paths()[0].vertices[:, 1].max()
    assert above > 1e-6  # region extends over the curve


def test_display_unit_conversion_is_exact():
    curve = make_curve(gap=False)
    fig = build_exclusion_figure([curve], mass_unit="mev", coupling_unit="gev")
    line = fig.axes[0].lines[0]
    assert np.array_equal(line.get_xdata(), curve.masses_ev * 1e3)
    assert np.array_equal(line.get_ydata(), curve.bounds * 1e-9)


def test_overlay_two_curves_with_legend():
    fig = build_exclusion_figure([
        make_curve(experiment="wall", target="axion"),
        make_curve(experiment="cavity", target="ellipticity", gap=False),
    ])
    ax = fig.axes[0]
    labels = [t.get_text() for t in ax.get_legend().get_texts()]
    assert labels == ["wall: axion", "cavity: ellipticity"]
    assert len([c for c in ax.collections if isinstance(c, PolyCollection)]) == 2


def test_empty_constrained_set_errors():
    masses = np.array([1e-5, 1e-4])
    empty = CurveFile(metadata={"bound_kind": "mixing"}, masses_ev=masses,
                      bounds=np.array([np.nan, np.nan]),
                      constrained=np.array([False, False]))
    with pytest.raises(ValueError, match="empty constrained set"):
        build_exclusion_figure([empty])


def test_mixed_bound_kinds_rejected():
    with pytest.raises(ValueError, match="different bound kinds"):
        build_exclusion_figure([make_curve(), make_curve(bound_kind="mixing")])


def test_bad_units_rejected():
    with pytest.raises(ValueError, match="mass unit"):
        build_exclusion_figure([make_curve()], mass_unit="kg")
    with pytest.raises(ValueError, match="coupling unit"):
        build_exclusion_figure([make_curve()], coupling_unit="joule")


def test_render_writes_deterministic_png(tmp_path):
    first = tmp_path / "a.png"
    second = tmp_path / "b.png"
    render_exclusion([make_curve()], str(first))
    render_exclusion([make_curve()], str(second))
    assert first.stat().st_size > 10_000
    assert first.read_bytes() == second.read_bytes()


# ---------------------------------------------------------------------------
# Campaign figures
# ---------------------------------------------------------------------------

def test_campaign_all_zero_record_renders_flat():
    fig = build_campaign_figure(make_record())
    ax = fig.axes[0]
    stems = [c for c in ax.collections if isinstance(c, LineCollection)]
    assert stems  # stems exist even when every count is zero
    assert ax.get_ylim()[1] >= 1.0
    assert "0 signal" in ax.get_title()


def test_campaign_counts_at_right_pulses():
    record = make_record(counts=[0, 0, 3, 0, 0, 1, 0, 0, 0, 0])
    fig = build_campaign_figure(record)
    ax = fig.axes[0]
    # Field-on markers carry pulses 0..5, field-off 6..9.
    on_line, off_line = ax.lines[0], ax.lines[1]
    assert on_line.get_xdata().tolist() == [0, 1, 2, 3, 4, 5]
    assert on_line.get_ydata().tolist() == [0, 0, 3, 0, 0, 1]
    assert off_line.get_ydata().tolist() == [0, 0, 0, 0]


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

CURVE_TEXT = """\
# experiment: demo
# target: axion
# bound_kind: inverse_coupling_ev
mass_ev,bound,constrained
1e-05,9e+14,1
0.001,8e+14,1
0.00284,,0
0.01,2e+14,1
"""


def test_cli_render_roundtrip(tmp_path):
    curve_path = tmp_path / "curve.csv"
    curve_path.write_text(CURVE_TEXT)
    out = tmp_path / "fig.png"
    assert main(["render", "--curve", str(curve_path), "--out", str(out),
                 "--mass-unit", "mev", "--coupling-unit", "gev"]) == 0
    assert out.exists() and out.stat().st_size > 10_000


def test_cli_schema_violation_exits_2_and_names_column(tmp_path, capsys):
    bad_path = tmp_path / "bad.csv"
    bad_path.write_text(CURVE_TEXT.replace("mass_ev,bound,constrained",
                                           "mass_ev,limit,constrained"))
    out = tmp_path / "fig.png"
    assert main(["render", "--curve", str(bad_path), "--out", str(out)]) == 2
    err = capsys.readouterr().err
    assert "bound" in err and "limit" in err
    assert not out.exists()


def test_cli_missing_file_exits_2(tmp_path, capsys):
    out = tmp_path / "fig.png"
    assert main(["render", "--curve", str(tmp_path / "nope.csv"), "--out", str(out)]) == 2
    assert not out.exists()


def test_cli_render_campaign(tmp_path):
    record_path = tmp_path / "record.csv"
    record_path.write_text(
        "# experiment: demo\n# total_signal: 0\n# total_dark: 0\n"
        "pulse,field_on,lambda_expected,signal_counts,dark_counts\n"
        "0,1,0.0,0,0\n1,0,0.0,0,0\n")
    out = tmp_path / "record.png"
    assert main(["render-campaign", "--record", str(record_path), "--out", str(out)]) == 0
    assert out.exists() and out.stat().st_size > 5_000
