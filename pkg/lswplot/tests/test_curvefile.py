import numpy as np
import pytest

from lswplot.curvefile import SchemaError, read_curve, read_record

CURVE_TEXT = """\
# format: lswlab-curve-v1
# version: 0.1.0
# experiment: demo
# target: axion
# bound_kind: inverse_coupling_ev
# p_upper: 3.3e-23
mass_ev,bound,constrained
1e-05,8.9e+14,1
0.001,8.7e+14,1
0.00284,,0
0.005,2.1e+14,1
"""

RECORD_TEXT = """\
# format: lswlab-record-v1
# experiment: demo
# seed: 7
# total_signal: 1
# total_dark: 1
pulse,field_on,lambda_expected,signal_counts,dark_counts
0,1,0.1,1,0
1,1,0.1,0,1
2,0,0.0,0,0
"""


def write(tmp_path, text, name="file.csv"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_read_curve_parses_metadata_and_points(tmp_path):
    curve = read_curve(write(tmp_path, CURVE_TEXT))
    assert curve.metadata["experiment"] == "demo"
    assert curve.metadata["p_upper"] == "3.3e-23"
    assert curve.bound_kind == "inverse_coupling_ev"
    assert curve.label == "demo: axion"
    assert curve.masses_ev.tolist() == [1e-5, 0.001, 0.00284, 0.005]
    assert curve.constrained.tolist() == [True, True, False, True]
    assert np.isnan(curve.bounds[2])
    assert curve.bounds[0] == 8.9e14


def test_read_curve_missing_column_named(tmp_path):
    bad = CURVE_TEXT.replace("mass_ev,bound,constrained", "mass_ev,constrained")
    with pytest.raises(SchemaError, match="missing column.*bound"):
        read_curve(write(tmp_path, bad))


def test_read_curve_unexpected_column_named(tmp_path):
    bad = CURVE_TEXT.replace("mass_ev,bound,constrained", "mass_ev,bound,ok,constrained")
    with pytest.raises(SchemaError, match="unexpected column.*ok"):
        read_curve(write(tmp_path, bad))


def test_read_curve_wrong_order_reported(tmp_path):
    bad = CURVE_TEXT.replace("mass_ev,bound,constrained", "bound,mass_ev,constrained")
    with pytest.raises(SchemaError, match="column order"):
        read_curve(write(tmp_path, bad))


def test_read_curve_bad_row_names_line(tmp_path):
    bad = CURVE_TEXT.replace("0.001,8.7e+14,1", "0.001,not-a-number,1")
    with pytest.raises(SchemaError, match="line 9.*bound"):
        read_curve(write(tmp_path, bad))


def test_read_curve_bad_flag_and_nonempty_gap(tmp_path):
    bad = CURVE_TEXT.replace("0.005,2.1e+14,1", "0.005,2.1e+14,maybe")
    with pytest.raises(SchemaError, match="constrained flag"):
        read_curve(write(tmp_path, bad))
    bad = CURVE_TEXT.replace("0.00284,,0", "0.00284,1e10,0")
    with pytest.raises(SchemaError, match="empty bound"):
        read_curve(write(tmp_path, bad))


def test_read_curve_requires_increasing_masses(tmp_path):
    bad = CURVE_TEXT.replace("0.005,2.1e+14,1", "0.0001,2.1e+14,1")
    with pytest.raises(SchemaError, match="strictly increasing"):
        read_curve(write(tmp_path, bad))


def test_read_curve_empty_body(tmp_path):
    header_only = "# format: lswlab-curve-v1\nmass_ev,bound,constrained\n"
    with pytest.raises(SchemaError, match="no data rows"):
        read_curve(write(tmp_path, header_only))


def test_read_record_parses(tmp_path):
    record = read_record(write(tmp_path, RECORD_TEXT))
    assert record.metadata["seed"] == "7"
    assert record.pulse.tolist() == [0, 1, 2]
    assert record.field_on.tolist() == [True, True, False]
    assert record.signal_counts.sum() == 1
    assert record.dark_counts.sum() == 1


def test_read_record_schema_errors(tmp_path):
    bad = RECORD_TEXT.replace("pulse,field_on,lambda_expected,signal_counts,dark_counts",
                              "pulse,field_on,lambda_expected,signal_counts")
    with pytest.raises(SchemaError, match="missing column.*dark_counts"):
        read_record(write(tmp_path, bad))
    bad = RECORD_TEXT.replace("1,1,0.1,0,1", "1,1,0.1,zero,1")
    with pytest.raises(SchemaError, match="line 8"):
        read_record(write(tmp_path, bad))
