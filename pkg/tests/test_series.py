"""CSV ingestion, grid repair, resampling, scaling and the synthetic feed."""

import numpy as np
import pytest

from wavecast.errors import (BadValue, ConstantSeries, DataError, EmptySeries,
                             MissingColumn, NonMonotonicTime, OffGridTime,
                             StepTooLarge)
from wavecast.series import (DEFAULT_STEP, SAMPLES_PER_DAY, ScaleParams,
                             TimeSeries, denormalize, load_csv, normalize,
                             resample, synth_meteo, write_csv)


def series(values, start=0, step=600, channel="synthetic"):
    return TimeSeries(channel, start, step, np.asarray(values, dtype=float))


# ----------------------------------------------------------------------
# TimeSeries basics


def test_times_follow_the_grid():
    ts = series([1.0, 2.0, 3.0], start=1000, step=600)
    assert len(ts) == 3
    np.testing.assert_array_equal(ts.times(), [1000, 1600, 2200])


def test_values_are_read_only():
    ts = series([1.0, 2.0])
    with pytest.raises(ValueError):
        ts.values[0] = 9.0


def test_rejects_empty_and_nonfinite():
    with pytest.raises(EmptySeries):
        series([])
    with pytest.raises(BadValue):
        series([1.0, np.nan])
    with pytest.raises(BadValue):
        series([np.inf])


def test_rejects_unknown_channel_and_bad_step():
    with pytest.raises(DataError):
        series([1.0], channel="pressure")
    with pytest.raises(DataError):
        series([1.0], step=0)


# ----------------------------------------------------------------------
# CSV round trips


def test_csv_round_trip_epoch(tmp_path):
    ts = synth_meteo(1, seed=3, channel="temperature")
    path = tmp_path / "t.csv"
    write_csv(ts, path)
    back = load_csv(path, "temperature")
    assert (back.start, back.step) == (ts.start, ts.step)
    np.testing.assert_array_equal(back.values, ts.values)


def test_csv_round_trip_iso(tmp_path):
    ts = synth_meteo(1, seed=3, channel="humidity")
    path = tmp_path / "h.csv"
    write_csv(ts, path, time_format="iso")
    first = path.read_text().splitlines()[1]
    assert first.startswith("2026-01-01T00:00:00+00:00,")
    back = load_csv(path, "humidity")
    assert back.start == ts.start
    np.testing.assert_array_equal(back.values, ts.values)


def test_zulu_timestamps_parse(tmp_path):
    path = tmp_path / "z.csv"
    path.write_text("time,value\n"
                    "2026-01-01T00:00:00Z,1.0\n"
                    "2026-01-01T00:10:00Z,2.0\n")
    ts = load_csv(path, "synthetic")
    assert ts.start == 1767225600
    assert ts.step == 600


def test_missing_column_named(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("time,reading\n0,1.0\n")
    with pytest.raises(MissingColumn, match="value"):
        load_csv(path, "synthetic")


def test_bad_value_reports_row(tmp_path):
    path = tmp_path / "b.csv"
    path.write_text("time,value\n0,1.0\n600,oops\n")
    with pytest.raises(BadValue, match="row 3"):
        load_csv(path, "synthetic")


def test_non_monotonic_reports_row(tmp_path):
    path = tmp_path / "n.csv"
    path.write_text("time,value\n0,1.0\n1200,2.0\n600,3.0\n")
    with pytest.raises(NonMonotonicTime, match="row 4"):
        load_csv(path, "synthetic")


def test_off_grid_stamp_rejected(tmp_path):
    path = tmp_path / "o.csv"
    path.write_text("time,value\n0,1.0\n600,2.0\n1200,3.0\n1500,4.0\n")
    with pytest.raises(OffGridTime):
        load_csv(path, "synthetic")


def test_short_gap_is_interpolated(tmp_path):
    # two missing samples (gap <= 3) get filled linearly
    path = tmp_path / "g.csv"
    path.write_text("time,value\n0,0.0\n600,1.0\n2400,4.0\n3000,5.0\n")
    ts = load_csv(path, "synthetic")
    assert len(ts) == 6
    np.testing.assert_allclose(ts.values, [0, 1, 2, 3, 4, 5])


def test_long_gap_splits_and_keeps_longer(tmp_path):
    lines = ["time,value", "0,1.0", "600,2.0"]
    # hole of 5 samples, then a longer run
    lines += [f"{4200 + 600 * i},{float(i)}" for i in range(4)]
    path = tmp_path / "s.csv"
    path.write_text("\n".join(lines) + "\n")
    ts = load_csv(path, "synthetic")
    assert ts.start == 4200
    np.testing.assert_array_equal(ts.values, [0.0, 1.0, 2.0, 3.0])


def test_split_tie_prefers_earlier_segment(tmp_path):
    lines = ["time,value", "0,7.0", "600,8.0"]
    lines += [f"{6000 + 600 * i},{9.0 + i}" for i in range(2)]
    path = tmp_path / "tie.csv"
    path.write_text("\n".join(lines) + "\n")
    ts = load_csv(path, "synthetic")
    assert ts.start == 0
    np.testing.assert_array_equal(ts.values, [7.0, 8.0])


def test_blank_values_count_as_holes(tmp_path):
    path = tmp_path / "h.csv"
    path.write_text("time,value\n0,1.0\n600,\n1200,3.0\n")
    ts = load_csv(path, "synthetic")
    np.testing.assert_allclose(ts.values, [1.0, 2.0, 3.0])


def test_single_row_uses_default_step(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("time,value\n0,5.5\n")
    ts = load_csv(path, "synthetic")
    assert ts.step == DEFAULT_STEP
    assert len(ts) == 1


def test_empty_file_rejected(tmp_path):
    path = tmp_path / "e.csv"
    path.write_text("time,value\n")
    with pytest.raises(EmptySeries):
        load_csv(path, "synthetic")


# ----------------------------------------------------------------------
# resampling


def test_resample_matches_hand_interpolation():
    ts = series([0.0, 4.0, 0.0], step=600)
    out = resample(ts, 200)
    assert out.step == 200
    np.testing.assert_allclose(
        out.values, [0.0, 4 / 3, 8 / 3, 4.0, 8 / 3, 4 / 3, 0.0])


def test_resample_identity_when_step_unchanged():
    ts = series([1.0, 3.0, 5.0])
    out = resample(ts, 600)
    np.testing.assert_array_equal(out.values, ts.values)


def test_resample_rejects_step_beyond_span():
    ts = series([1.0, 2.0, 3.0], step=600)
    with pytest.raises(StepTooLarge):
        resample(ts, 2000)


# ----------------------------------------------------------------------
# scaling


def test_normalize_hits_the_target_interval():
    ts = series([2.0, 4.0, 6.0])
    norm, params = normalize(ts)
    np.testing.assert_allclose(norm.values, [-1.0, 0.0, 1.0])
    assert (params.offset, params.gain) == (2.0, 0.5)


def test_normalize_round_trip_is_exact_to_float():
    ts = synth_meteo(1, seed=9, channel="wind_speed")
    norm, params = normalize(ts)
    back = denormalize(norm.values, params)
    np.testing.assert_allclose(back, ts.values, atol=1e-10)


def test_normalize_constant_series_rejected():
    with pytest.raises(ConstantSeries):
        normalize(series([3.0, 3.0, 3.0]))


def test_scale_params_validate_their_fields():
    with pytest.raises(DataError):
        ScaleParams(0.0, 0.0, -1.0, 1.0)
    with pytest.raises(DataError):
        ScaleParams(0.0, 1.0, 1.0, -1.0)


# ----------------------------------------------------------------------
# synthetic generator


def test_synth_is_deterministic_per_seed():
    a = synth_meteo(2, seed=5, channel="irradiance")
    b = synth_meteo(2, seed=5, channel="irradiance")
    c = synth_meteo(2, seed=6, channel="irradiance")
    np.testing.assert_array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_synth_grid_and_length():
    ts = synth_meteo(3, seed=1, channel="temperature")
    assert len(ts) == 3 * SAMPLES_PER_DAY
    assert ts.step == DEFAULT_STEP


def test_synth_irradiance_is_physical():
    ts = synth_meteo(4, seed=2, channel="irradiance")
    assert ts.values.min() >= 0.0
    assert ts.values.max() <= 1400.0
    # night samples exist and are dark
    assert (ts.values == 0.0).sum() > SAMPLES_PER_DAY


def test_synth_channels_differ():
    t = synth_meteo(1, seed=4, channel="temperature")
    h = synth_meteo(1, seed=4, channel="humidity")
    assert not np.array_equal(t.values, h.values)


def test_synth_rejects_bad_arguments():
    with pytest.raises(DataError):
        synth_meteo(0, seed=1, channel="irradiance")
    with pytest.raises(DataError):
        synth_meteo(1, seed=1, channel="nope")
