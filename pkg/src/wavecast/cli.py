"""Command-line surface: synth, decompose, train, forecast, evaluate, sweep.

Every command writes its outputs (CSV tables, figures, checkpoints) under
--out together with run_manifest.json recording the argument list, the
resolved configuration and library versions.  Exit codes: 0 success,
2 usage error, 3 data error, 4 training divergence.  Errors print one
machine-parsable line on stderr: "<ErrorClass>: <message>".
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys

import numpy as np

from . import __version__
from .config import apply_overrides, defaults, parse_config, render_config
from .errors import (DataError, DivergenceError, MisalignedSeries,
                     UsageError, WavecastError)
from .filters import FAMILIES, dwt, export_pyramid, filter_bank
from .metrics import evaluate, mse_trace_export
from .pipeline import (forecast, load_checkpoint, prepare_vectors,
                       run_single, run_table1_sweep, save_checkpoint,
                       export_sweep_csv)
from .plots import (save_channels, save_forecast, save_mse_trace,
                    save_pyramid, save_sweep)
from .series import (CHANNELS, TimeSeries, load_csv, normalize, resample,
                     synth_meteo, write_csv)

DATA_CHANNELS = ("irradiance", "temperature", "humidity", "wind_speed")


def _outdir(args):
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out, args, cfg=None):
    manifest = {
        "argv": args._argv,
        "command": args.command,
        "config": None if cfg is None else render_config(cfg),
        "versions": {
            "wavecast": __version__,
            "numpy": np.__version__,
            "python": ".".join(str(v) for v in sys.version_info[:3]),
        },
    }
    path = pathlib.Path(out) / "run_manifest.json"
    path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def _load_config(args):
    cfg = parse_config(args.config) if args.config else defaults()
    return apply_overrides(cfg, getattr(args, "set", None))


def _load_channels(cfg, data_dir):
    """Channel resolution: explicit CSV paths, then a data directory,
    then the seeded synthetic generator."""
    paths = {ch: cfg.get(f"{ch}_csv", "") for ch in DATA_CHANNELS}
    channels = {}
    if all(paths.values()):
        for ch, path in paths.items():
            channels[ch] = load_csv(path, ch)
    elif data_dir:
        for ch in DATA_CHANNELS:
            path = pathlib.Path(data_dir) / f"{ch}.csv"
            if not path.exists():
                raise DataError(f"missing {path}")
            channels[ch] = load_csv(path, ch)
    else:
        for ch in DATA_CHANNELS:
            channels[ch] = synth_meteo(cfg["days"], cfg["seed"], ch)
    step = cfg["step"]
    for ch, ts in channels.items():
        if ts.step != step:
            channels[ch] = resample(ts, step)
    return channels


def _report_csv(report, path):
    lines = ["family,2N,relative_rms_percent,gamma,epochs",
             f"{report.family},{report.neuron_count_2N},"
             f"{report.relative_rms_percent!r},{report.gamma!r},"
             f"{report.epochs_to_converge}"]
    pathlib.Path(path).write_text("\n".join(lines) + "\n")


# ----------------------------------------------------------------------
# commands


def _cmd_synth(args):
    out = _outdir(args)
    channels = {}
    for ch in DATA_CHANNELS:
        ts = synth_meteo(args.days, args.seed, ch)
        write_csv(ts, out / f"{ch}.csv")
        channels[ch] = ts
    save_channels(channels, out / "channels.png")
    print(f"wrote {len(channels)} channel CSVs under {out}")
    return 0


def _cmd_decompose(args):
    out = _outdir(args)
    ts = load_csv(args.infile, args.channel)
    if args.normalize:
        ts, _ = normalize(ts)
    bank = filter_bank(args.family)
    pyr = dwt(ts.values, bank, args.levels)
    export_pyramid(pyr, out)
    save_pyramid(pyr, out / "pyramid.png")
    print(f"decomposed {len(ts)} samples into {pyr.levels} levels "
          f"({bank.family}, {pyr.boundary_mode}) under {out}")
    return 0


def _cmd_train(args):
    out = _outdir(args)
    cfg = _load_config(args)
    channels = _load_channels(cfg, args.data)
    split = (cfg["split_train"], cfg["split_val"], cfg["split_test"])
    report, net, vectors, scales = run_single(
        channels, cfg["family"], cfg["levels"], cfg["horizon_steps"],
        hidden=cfg["hidden"], eta=cfg["eta"], seed=cfg["seed"], split=split,
        max_epochs=cfg["max_epochs"], patience=cfg["patience"],
        min_delta=cfg["min_delta"])
    _report_csv(report, out / "report.csv")
    mse_trace_export(report.mse_trace, out / "mse_trace.csv")
    save_mse_trace(report.mse_trace, out / "mse_trace.png",
                   title=f"{report.family}: training error")
    pred = forecast(net, vectors)
    write_csv(pred, out / "forecast.csv")
    actual = channels["irradiance"]
    save_forecast(pred, actual, out / "forecast.png")
    save_checkpoint(out / "checkpoint.npz", net, scales, cfg["levels"],
                    cfg["horizon_steps"], cfg["step"], seed=cfg["seed"])
    print(f"family={report.family} rms={report.relative_rms_percent:.3f}% "
          f"gamma={report.gamma:.4f} best_epoch={report.epochs_to_converge} "
          f"(range-normalized RMS)")
    return 0


def _cmd_forecast(args):
    out = _outdir(args)
    cfg = _load_config(args)
    net, scales, meta = load_checkpoint(args.checkpoint)
    cfg["step"] = meta["step"]
    channels = _load_channels(cfg, args.data)
    vectors, _ = prepare_vectors(channels, meta["family"], meta["levels"],
                                 meta["horizon_steps"], scales=scales)
    pred = forecast(net, vectors)
    write_csv(pred, out / "forecast.csv")
    save_forecast(pred, channels["irradiance"], out / "forecast.png")
    print(f"forecast {len(pred)} samples "
          f"({meta['horizon_steps']} steps ahead) under {out}")
    return 0


def _cmd_evaluate(args):
    out = _outdir(args)
    pred = load_csv(args.pred, "irradiance")
    actual = load_csv(args.actual, "irradiance")
    if pred.step != actual.step:
        raise MisalignedSeries(
            f"step mismatch: {pred.step}s vs {actual.step}s")
    t0 = max(pred.start, actual.start)
    t1 = min(pred.start + (len(pred) - 1) * pred.step,
             actual.start + (len(actual) - 1) * actual.step)
    if t0 > t1 or (t0 - pred.start) % pred.step or \
            (t0 - actual.start) % actual.step:
        raise MisalignedSeries("series grids do not overlap")
    p = pred.values[(t0 - pred.start) // pred.step:
                    (t1 - pred.start) // pred.step + 1]
    a = actual.values[(t0 - actual.start) // actual.step:
                      (t1 - actual.start) // actual.step + 1]
    result = evaluate(p, a)
    lines = ["metric,value",
             f"relative_rms_percent,{result.relative_rms_percent!r}",
             f"gamma,{result.gamma!r}",
             f"mse,{result.mse!r}",
             f"n_samples,{result.n_samples}",
             "rms_normalization,range_of_actual"]
    (out / "metrics.csv").write_text("\n".join(lines) + "\n")
    save_forecast(TimeSeries("irradiance", t0, pred.step, p),
                  TimeSeries("irradiance", t0, actual.step, a),
                  out / "evaluate.png")
    print(f"rms={result.relative_rms_percent:.3f}% gamma={result.gamma:.4f} "
          f"n={result.n_samples} (range-normalized RMS)")
    return 0


def _cmd_sweep(args):
    out = _outdir(args)
    cfg = _load_config(args)
    if args.families.strip().lower() == "all":
        families = list(FAMILIES)
    else:
        families = [f.strip() for f in args.families.split(",") if f.strip()]
    channels = _load_channels(cfg, args.data)
    split = (cfg["split_train"], cfg["split_val"], cfg["split_test"])
    reports, failures = run_table1_sweep(
        families, channels, cfg["levels"], cfg["horizon_steps"],
        hidden=cfg["hidden"], table1_sizes=cfg["table1_sizes"],
        eta=cfg["eta"], seed=cfg["seed"], split=split,
        max_epochs=cfg["max_epochs"], patience=cfg["patience"],
        min_delta=cfg["min_delta"], workers=cfg["workers"])
    export_sweep_csv(reports, out / "sweep.csv")
    if reports:
        save_sweep(reports, out / "sweep.png")
    if failures:
        lines = ["family,error"]
        lines += [f"{fam},{msg}" for fam, msg in sorted(failures.items())]
        (out / "failures.csv").write_text("\n".join(lines) + "\n")
    for r in reports:
        print(f"{r.family}: rms={r.relative_rms_percent:.3f}% "
              f"gamma={r.gamma:.4f} epochs={r.epochs_to_converge}")
    if failures:
        print(f"{len(failures)} famil{'y' if len(failures) == 1 else 'ies'} "
              f"failed; see failures.csv")
    if not reports:
        raise DataError("every family in the sweep failed")
    return 0


# ----------------------------------------------------------------------
# argument wiring


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="wavecast",
        description="Wavelet-domain recurrent forecasting of solar "
                    "irradiance from weather channels.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, config=True):
        p.add_argument("--out", default=".", help="output directory")
        if config:
            p.add_argument("--config", default=None,
                           help="key=value config file")
            p.add_argument("--set", action="append", metavar="KEY=VALUE",
                           help="config override (repeatable)")
            p.add_argument("--data", default=None,
                           help="directory holding <channel>.csv files")

    p = sub.add_parser("synth", help="generate seeded synthetic channels")
    p.add_argument("--days", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    add_common(p, config=False)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("decompose", help="multilevel wavelet analysis of "
                                         "one CSV series")
    p.add_argument("--family", required=True, choices=list(FAMILIES))
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--channel", default="synthetic", choices=list(CHANNELS))
    p.add_argument("--normalize", action="store_true",
                   help="scale to [-1, 1] before decomposing")
    add_common(p, config=False)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("train", help="train the forecaster end to end")
    add_common(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("forecast", help="run a trained checkpoint over data")
    p.add_argument("--checkpoint", required=True)
    add_common(p)
    p.set_defaults(func=_cmd_forecast)

    p = sub.add_parser("evaluate", help="compare forecast and measurement "
                                        "CSVs")
    p.add_argument("--pred", required=True)
    p.add_argument("--actual", required=True)
    add_common(p, config=False)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("sweep", help="train every family and tabulate")
    p.add_argument("--families", default="all",
                   help='"all" or comma-separated family names')
    add_common(p)
    p.set_defaults(func=_cmd_sweep)
    return ap


def run(argv):
    """Entry point used by tests; returns the process exit code."""
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._argv = list(argv)
    try:
        # manifest first, so even a failed run leaves its provenance
        cfg = _load_config(args) if hasattr(args, "config") else None
        _write_manifest(_outdir(args), args, cfg)
        return args.func(args)
    except UsageError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 4
    except (DataError, WavecastError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
