"""Flat key=value run configuration with typed parsing.

A config file holds one `key = value` pair per line; `#` starts a
comment.  Command-line overrides use the same `key=value` grammar and
win over the file.  Every key is checked against the schema below and
unknown keys are rejected outright, never silently ignored.
"""

from __future__ import annotations

import math
import pathlib

from .errors import IoError, UsageError


def _parse_bool(raw):
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(raw)


def _parse_patience(raw):
    if raw.strip().lower() in ("inf", "infinite", "none"):
        return math.inf
    return int(raw)


def _parse_hidden(raw):
    parts = [int(p) for p in raw.replace(",", " ").split()]
    return tuple(parts)


# key -> (parser, default)
SCHEMA = {
    "family": (str, "bior3.7"),
    "levels": (int, 9),
    "horizon_steps": (int, 288),
    "step": (int, 600),
    "days": (int, 60),
    "seed": (int, 0),
    "eta": (float, 0.005),
    "beta": (float, 1.0),
    "clip": (float, 1.0),
    "max_epochs": (int, 5000),
    "patience": (_parse_patience, 200),
    "min_delta": (float, 0.0),
    "split_train": (float, 0.70),
    "split_val": (float, 0.15),
    "split_test": (float, 0.15),
    "hidden": (_parse_hidden, (16, 16)),
    "table1_sizes": (_parse_bool, False),
    "workers": (int, 1),
    "irradiance_csv": (str, ""),
    "temperature_csv": (str, ""),
    "humidity_csv": (str, ""),
    "wind_speed_csv": (str, ""),
}


def defaults():
    return {k: d for k, (_, d) in SCHEMA.items()}


def _set(cfg, key, raw, where):
    key = key.strip()
    if key not in SCHEMA:
        raise UsageError(f"{where}: unknown config key {key!r}")
    parser, _ = SCHEMA[key]
    try:
        cfg[key] = parser(raw.strip())
    except (ValueError, TypeError):
        raise UsageError(
            f"{where}: bad value {raw.strip()!r} for key {key!r}") from None


def parse_config(path):
    """Read a config file on top of the defaults."""
    cfg = defaults()
    try:
        text = pathlib.Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    for ln, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise UsageError(f"{path}:{ln}: expected key=value, got {body!r}")
        key, raw = body.split("=", 1)
        _set(cfg, key, raw, f"{path}:{ln}")
    return cfg


def apply_overrides(cfg, pairs):
    """Apply `key=value` strings (CLI --set) on top of a config dict."""
    for pair in pairs or ():
        if "=" not in pair:
            raise UsageError(f"override {pair!r} is not key=value")
        key, raw = pair.split("=", 1)
        _set(cfg, key, raw, "override")
    return cfg


def render_config(cfg):
    """Stable text form (sorted keys) for manifests."""
    lines = []
    for key in sorted(cfg):
        val = cfg[key]
        if isinstance(val, tuple):
            val = ",".join(str(v) for v in val)
        lines.append(f"{key} = {val}")
    return "\n".join(lines) + "\n"
