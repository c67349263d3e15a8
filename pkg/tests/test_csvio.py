import numpy as np
import pytest

from cogarch import IngestError
from cogarch.csvio import read_returns, write_csv, write_returns
from cogarch.simulate import ReturnSeries


def test_round_trip_lossless(tmp_path):
    rng = np.random.default_rng(1)
    times = np.concatenate([[0.0], np.cumsum(rng.uniform(0.01, 2.0, 64))])
    series = ReturnSeries(times=times, returns=rng.standard_normal(64) * 1e-3)
    path = tmp_path / "r.csv"
    write_returns(series, path, version="0.0-test", seed=9, config_hash="abc")
    back = read_returns(path)
    assert np.array_equal(back.times, series.times)
    assert np.array_equal(back.returns, series.returns)


def test_comment_header_present(tmp_path):
    series = ReturnSeries.from_equidistant(np.array([0.25, -0.5]), 1.0)
    path = tmp_path / "r.csv"
    write_returns(series, path, version="1.2.3", seed=42, config_hash="deadbeef0123")
    first = path.read_text().splitlines()[0]
    assert first.startswith("#")
    assert "1.2.3" in first and "seed=42" in first and "config=deadbeef0123" in first


def test_value_only_layout(tmp_path):
    path = tmp_path / "v.csv"
    path.write_text("value\n0.5\n-0.25\n0.125\n")
    series = read_returns(path, delta=1.0)
    assert np.array_equal(series.times, np.array([0.0, 1.0, 2.0, 3.0]))
    assert np.array_equal(series.returns, np.array([0.5, -0.25, 0.125]))


def test_value_only_requires_delta(tmp_path):
    path = tmp_path / "v.csv"
    path.write_text("value\n0.5\n")
    with pytest.raises(IngestError, match="delta"):
        read_returns(path)


def test_equal_times_rejected(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("time,value\n0.0,\n1.0,0.5\n1.0,0.25\n")
    with pytest.raises(IngestError, match="strictly increasing") as err:
        read_returns(path)
    assert err.value.row == 4


def test_malformed_number_rejected(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("time,value\n0.0,\n1.0,abc\n")
    with pytest.raises(IngestError, match="malformed"):
        read_returns(path)


def test_nan_rejected(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("time,value\n0.0,\n1.0,nan\n")
    with pytest.raises(IngestError, match="NaN"):
        read_returns(path)


def test_blank_value_rejected(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("time,value\n0.0,\n1.0,0.5\n2.0,\n")
    with pytest.raises(IngestError, match="malformed"):
        read_returns(path)


def test_origin_row_must_be_blank(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("time,value\n0.0,0.1\n1.0,0.5\n")
    with pytest.raises(IngestError, match="origin"):
        read_returns(path)


def test_unknown_header_rejected(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(IngestError, match="header"):
        read_returns(path)


def test_empty_file_rejected(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("")
    with pytest.raises(IngestError, match="empty"):
        read_returns(path)


def test_write_csv_17_digits(tmp_path):
    path = tmp_path / "t.csv"
    x = 0.1 + 0.2  # not representable exactly; needs 17 digits
    write_csv(path, ["a", "b"], [(x, "name")], version="0")
    line = path.read_text().splitlines()[2]
    assert float(line.split(",")[0]) == x
