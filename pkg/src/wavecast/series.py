"""Uniform time series: CSV ingestion, resampling, scaling, synthesis.

Series are strictly uniform grids described by a start epoch, a step in
seconds and a value array.  CSV input (RFC 4180, header required) may
carry ISO-8601 or integer epoch timestamps; rows must be strictly
increasing and on a common grid.  Small holes (at most three consecutive
missing samples, whether absent rows or empty value cells) are filled by
linear interpolation; anything longer splits the series and the longer
side wins.

The synthetic generator produces seeded, mutually consistent weather
channels: one shared per-day amplitude sequence drives a clipped diurnal
half-sine of irradiance together with matching temperature, humidity and
wind excursions, so the meteorological channels genuinely carry
information about irradiance days in advance.
"""

from __future__ import annotations

import csv
import io
import math
import pathlib
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .errors import (BadValue, ConstantSeries, DataError, EmptySeries,
                     IoError, MissingColumn, NonMonotonicTime, OffGridTime,
                     StepTooLarge)

CHANNELS = ("irradiance", "temperature", "humidity", "wind_speed",
            "synthetic")

DEFAULT_STEP = 600                      # seconds
SAMPLES_PER_DAY = 86400 // DEFAULT_STEP # 144
IRRADIANCE_CEILING = 1400.0             # W/m^2, sensor full scale

_SYNTH_START = 1767225600               # 2026-01-01T00:00:00Z


@dataclass(frozen=True)
class TimeSeries:
    channel: str
    start: int          # epoch seconds of the first sample
    step: int           # seconds between samples
    values: np.ndarray

    def __post_init__(self):
        if self.channel not in CHANNELS:
            raise DataError(f"unknown channel {self.channel!r}; expected one "
                            f"of {', '.join(CHANNELS)}")
        if self.step <= 0:
            raise DataError(f"step must be positive, got {self.step}")
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or len(vals) == 0:
            raise EmptySeries(f"{self.channel}: series has no samples")
        if not np.all(np.isfinite(vals)):
            raise BadValue(f"{self.channel}: non-finite sample")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def times(self):
        return self.start + self.step * np.arange(len(self.values))

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class ScaleParams:
    """Affine map y = lo + (x - offset) * gain and its exact inverse."""

    offset: float
    gain: float
    lo: float
    hi: float

    def __post_init__(self):
        if self.gain == 0.0 or self.lo >= self.hi:
            raise DataError("scale needs gain != 0 and lo < hi")

    def apply(self, x):
        return self.lo + (np.asarray(x, dtype=float) - self.offset) * self.gain

    def invert(self, y):
        return self.offset + (np.asarray(y, dtype=float) - self.lo) / self.gain


# ----------------------------------------------------------------------
# CSV ingestion


def _parse_time(raw, row):
    raw = raw.strip()
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw).__trunc__() if raw.replace(".", "", 1).isdigit() \
            else _iso_to_epoch(raw)
    except ValueError:
        raise BadValue(f"row {row}: cannot parse timestamp {raw!r}") from None


def _iso_to_epoch(raw):
    txt = raw.replace("Z", "+00:00")
    dt = datetime.fromisoformat(txt)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def _read_rows(path, time_column, value_column):
    try:
        text = pathlib.Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise EmptySeries(f"{path}: no header row")
    for col in (time_column, value_column):
        if col not in reader.fieldnames:
            raise MissingColumn(
                f"{path}: column {col!r} not in header {reader.fieldnames}")
    out = []
    for i, rec in enumerate(reader, start=2):   # first data row is line 2
        t = _parse_time(rec[time_column], i)
        raw = (rec[value_column] or "").strip()
        if raw == "" or raw.lower() == "nan":
            val = None
        else:
            try:
                val = float(raw)
            except ValueError:
                raise BadValue(
                    f"row {i}: cannot parse value {raw!r}") from None
        out.append((t, val))
    if not out:
        raise EmptySeries(f"{path}: no data rows")
    return out


def _infer_step(times):
    diffs = np.diff(times)
    if np.any(diffs <= 0):
        bad = int(np.argmax(diffs <= 0)) + 3   # +2 header/base, +1 next row
        raise NonMonotonicTime(f"row {bad}: timestamps must strictly increase")
    vals, counts = np.unique(diffs, return_counts=True)
    step = int(vals[np.argmax(counts)])
    off = (diffs % step) != 0
    if np.any(off):
        bad = int(np.argmax(off)) + 3
        raise OffGridTime(f"row {bad}: timestamp off the {step}s grid")
    return step


def load_csv(path, channel, time_column="time", value_column="value",
             max_gap=3):
    """Read one channel from CSV into a uniform TimeSeries."""
    rows = _read_rows(path, time_column, value_column)
    times = np.array([t for t, _ in rows], dtype=np.int64)
    if len(times) == 1:
        if rows[0][1] is None:
            raise EmptySeries(f"{path}: the only row has no value")
        return TimeSeries(channel, int(times[0]), DEFAULT_STEP,
                          np.array([rows[0][1]]))
    step = _infer_step(times)

    n_grid = (times[-1] - times[0]) // step + 1
    grid = np.full(int(n_grid), np.nan)
    for (t, v) in rows:
        if v is not None:
            grid[(t - times[0]) // step] = v

    present = np.flatnonzero(~np.isnan(grid))
    if len(present) == 0:
        raise EmptySeries(f"{path}: no usable values")
    # fill internal holes of at most max_gap samples
    keep_break = np.zeros(len(grid), dtype=bool)
    for a, b in zip(present[:-1], present[1:]):
        hole = b - a - 1
        if hole == 0:
            continue
        if hole <= max_gap:
            grid[a:b + 1] = np.interp(np.arange(a, b + 1), [a, b],
                                      [grid[a], grid[b]])
        else:
            keep_break[a + 1:b] = True
    # split on the remaining holes (plus missing leading/trailing samples)
    usable = ~np.isnan(grid) & ~keep_break
    best = (0, 0)
    i = 0
    while i < len(grid):
        if usable[i]:
            j = i
            while j + 1 < len(grid) and usable[j + 1]:
                j += 1
            if j - i + 1 > best[1] - best[0]:
                best = (i, j + 1)
            i = j + 1
        else:
            i += 1
    lo, hi = best
    if hi - lo == 0:
        raise EmptySeries(f"{path}: no contiguous segment")
    return TimeSeries(channel, int(times[0] + lo * step), step,
                      grid[lo:hi].copy())


def write_csv(ts, path, time_format="epoch"):
    lines = ["time,value"]
    times = ts.times()
    for t, v in zip(times, ts.values):
        if time_format == "iso":
            stamp = datetime.fromtimestamp(int(t), tz=timezone.utc).strftime(
                "%Y-%m-%dT%H:%M:%S+00:00")
        else:
            stamp = str(int(t))
        lines.append(f"{stamp},{float(v)!r}")
    pathlib.Path(path).write_text("\n".join(lines) + "\n")


# ----------------------------------------------------------------------
# resampling / scaling


def resample(ts, new_step):
    """Linear interpolation onto a new grid anchored at the series start."""
    if new_step <= 0:
        raise DataError(f"step must be positive, got {new_step}")
    span = (len(ts) - 1) * ts.step
    if new_step > span:
        raise StepTooLarge(
            f"step {new_step}s exceeds the series span of {span}s")
    n_out = span // new_step + 1
    new_times = ts.start + new_step * np.arange(n_out)
    vals = np.interp(new_times, ts.times(), ts.values)
    return TimeSeries(ts.channel, ts.start, int(new_step), vals)


def normalize(ts, lo=-1.0, hi=1.0):
    """Scale onto [lo, hi]; returns the series and the exact inverse map."""
    vmin, vmax = float(np.min(ts.values)), float(np.max(ts.values))
    if vmax == vmin:
        raise ConstantSeries(
            f"{ts.channel}: constant series cannot be normalized")
    params = ScaleParams(vmin, (hi - lo) / (vmax - vmin), float(lo), float(hi))
    return TimeSeries(ts.channel, ts.start, ts.step,
                      params.apply(ts.values)), params


def denormalize(values, params):
    return params.invert(values)


# ----------------------------------------------------------------------
# synthetic generator


_CHANNEL_KEY = {name: i + 1 for i, name in enumerate(CHANNELS)}


def _day_profile(days, seed):
    """Shared per-day amplitude factors; smooth, seeded, in [0.6, 1.1]."""
    rng = np.random.default_rng([int(seed), 0])
    raw = rng.uniform(-1.0, 1.0, size=days + 2)
    smooth = np.convolve(raw, [0.25, 0.5, 0.25], mode="valid")
    return 0.85 + 0.25 * smooth


def synth_meteo(days, seed, channel):
    """Seeded synthetic channel at the default 600 s step, 144/day."""
    if channel not in CHANNELS:
        raise DataError(f"unknown channel {channel!r}")
    if days < 1:
        raise DataError("need at least one day")
    n = days * SAMPLES_PER_DAY
    t = np.arange(n)
    daypos = (t % SAMPLES_PER_DAY) / SAMPLES_PER_DAY
    amp = np.repeat(_day_profile(days, seed), SAMPLES_PER_DAY)

    def sun(shift=0.0):
        phase = (daypos - 0.25 - shift) / 0.5
        return np.where((phase >= 0) & (phase <= 1),
                        np.sin(np.pi * np.clip(phase, 0, 1)), 0.0)

    rng = np.random.default_rng([int(seed), _CHANNEL_KEY[channel]])
    if channel == "irradiance":
        vals = 1050.0 * amp * sun() ** 1.2
        vals += rng.normal(0.0, 6.0, n) * (vals > 0)
        vals = np.clip(vals, 0.0, IRRADIANCE_CEILING)
    elif channel == "temperature":
        vals = 11.0 + 11.0 * amp * sun(shift=0.08) + rng.normal(0, 0.25, n)
    elif channel == "humidity":
        vals = 82.0 - 40.0 * amp * sun(shift=0.06) + rng.normal(0, 0.8, n)
        vals = np.clip(vals, 4.0, 100.0)
    elif channel == "wind_speed":
        vals = 2.5 + 4.5 * amp * sun(shift=0.12) + np.abs(
            rng.normal(0, 0.4, n))
        vals = np.clip(vals, 0.0, None)
    else:   # "synthetic": a plain seeded band-limited test signal
        base = rng.standard_normal(n)
        kernel = np.exp(-0.5 * (np.arange(-12, 13) / 4.0) ** 2)
        vals = np.convolve(base, kernel / kernel.sum(), mode="same")
    return TimeSeries(channel, _SYNTH_START, DEFAULT_STEP, vals)
