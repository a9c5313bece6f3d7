"""Forecast quality metrics and error-trace export.

The relative RMS here is range-normalized: the RMS error is divided by
the observed range of the actual series, then expressed in percent.
Mean-normalization would blow up on signals that hover near zero for
long stretches (irradiance at night), so the range convention is used
everywhere and stated in every report this package writes.
"""

from __future__ import annotations

import pathlib
from dataclasses import dataclass

import numpy as np

from .errors import (ConstantActual, ConstantSeries, EmptyInput, IoError,
                     LengthMismatch)


@dataclass(frozen=True)
class EvalResult:
    relative_rms_percent: float
    gamma: float
    n_samples: int
    mse: float


def _paired(pred, actual):
    p = np.asarray(pred, dtype=float)
    a = np.asarray(actual, dtype=float)
    if p.shape != a.shape:
        raise LengthMismatch(f"pred has {p.shape}, actual has {a.shape}")
    if p.ndim != 1 or len(p) < 2:
        raise EmptyInput("need at least two paired samples")
    return p, a


def relative_rms(pred, actual):
    """Percent RMS error over the observed range of the actual series."""
    p, a = _paired(pred, actual)
    span = float(np.max(a) - np.min(a))
    if span == 0.0:
        raise ConstantActual("actual series is constant; range is zero")
    return 100.0 * float(np.sqrt(np.mean((p - a) ** 2))) / span


def correlation(pred, actual):
    """Pearson correlation between forecast and measurement."""
    p, a = _paired(pred, actual)
    pc = p - p.mean()
    ac = a - a.mean()
    denom = float(np.sqrt(np.sum(pc * pc) * np.sum(ac * ac)))
    if denom == 0.0:
        raise ConstantSeries("correlation undefined for a constant series")
    return float(np.dot(pc, ac)) / denom


def evaluate(pred, actual):
    p, a = _paired(pred, actual)
    return EvalResult(relative_rms_percent=relative_rms(p, a),
                      gamma=correlation(p, a),
                      n_samples=len(p),
                      mse=float(np.mean((p - a) ** 2)))


def mse_trace_export(trace, path):
    """Write a per-epoch error trace as a two-column CSV (epoch from 1)."""
    vals = np.asarray(trace, dtype=float)
    if vals.ndim != 1 or len(vals) == 0:
        raise EmptyInput("empty error trace")
    lines = ["epoch,mse"]
    lines.extend(f"{i},{float(v)!r}" for i, v in enumerate(vals, start=1))
    try:
        pathlib.Path(path).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
