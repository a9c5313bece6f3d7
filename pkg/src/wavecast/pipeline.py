"""Forecasting pipeline: coefficient vectors, masked net, training loop.

The forecaster consumes wavelet coefficients rather than raw samples:
for every base time t0 it gathers the half-rate smooth band a1(t0), the
finest detail d1(t0) and the two second-level details straddling t0,
from each of the three weather channels (temperature, humidity, wind),
giving a 12-element row.  Three delayed copies of the row plus the fed
back previous output drive a 33-neuron recurrent net whose hidden
neurons use the wavelet-shaped activation; the single output neuron is
linear so the prediction denormalizes affinely.

The layered topology lives inside a fully connected recurrent net as a
structural mask: weights off the layer-to-layer, delay-tap and
output-feedback edges are pinned at exactly zero, and the unmodified
sensitivity-propagation trainer handles the rest.  Training uses a
chronological 70/15/15 split with early stopping on validation error.
"""

from __future__ import annotations

import concurrent.futures
import io
import json
import math
import pathlib
import zipfile
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (BadLevels, DataError, Diverged, HorizonTooShort,
                     InsufficientHistory, MisalignedSeries, UsageError)
from .filters import approximation_band, dwt, filter_bank
from .metrics import correlation, relative_rms
from .rnn import (Linear, PerNeuron, RbfWavelet, RnnConfig, forward,
                  init_state, reset_episode, train_span)
from .series import (IRRADIANCE_CEILING, ScaleParams, TimeSeries, normalize)

CHANNEL_ORDER = ("temperature", "humidity", "wind_speed")
VECTOR_BANDS = ("a1", "d1", "d2-", "d2+")
WARMUP_ROWS = 3     # delay depth; excluded from every loss and report


@dataclass(frozen=True)
class WrnnTopology:
    input_width: int = 12
    hidden: tuple = (16, 16)
    output: int = 1
    input_delay_taps: int = 3
    output_feedback_taps: int = 1

    def __post_init__(self):
        if len(self.hidden) != 2:
            raise UsageError("exactly two hidden layers are supported")
        if any(h < 2 or h % 2 for h in self.hidden):
            raise UsageError("hidden layer sizes must be even and >= 2")
        if self.output != 1 or self.output_feedback_taps != 1:
            raise UsageError("a single fed-back output neuron is required")
        if self.input_delay_taps < 1:
            raise UsageError("need at least one delay tap")

    @property
    def n_neurons(self):
        return self.output + sum(self.hidden)

    @property
    def n_external(self):
        return self.input_width * self.input_delay_taps


@dataclass(frozen=True)
class InputVectorSet:
    rows: np.ndarray          # (n_usable, 12) coefficient rows at t0 >= 3
    targets: np.ndarray       # (n_usable,) normalized target at t0 + horizon
    lead_rows: np.ndarray     # (WARMUP_ROWS, 12) rows at t0 = 0,1,2
    band_map: tuple           # "channel:band" label per vector position
    horizon_steps: int
    step: int                 # seconds
    first_target_epoch: int   # timestamp of targets[0]
    scale: ScaleParams | None = None

    def __len__(self):
        return len(self.rows)

    def delayed_matrix(self):
        """(n_usable, 36) rows: current plus two delayed coefficient rows."""
        full = np.vstack([self.lead_rows, self.rows])
        w = WARMUP_ROWS
        return np.hstack([full[w:], full[w - 1:-1], full[w - 2:-2]])


@dataclass(frozen=True)
class WrnnNet:
    cfg: RnnConfig
    state: object            # RnnState; mutated by training
    topology: WrnnTopology
    family: str
    activation: PerNeuron


@dataclass(frozen=True)
class TrainReport:
    family: str
    neuron_count_2N: int
    relative_rms_percent: float
    gamma: float
    epochs_to_converge: int
    mse_trace: tuple = field(repr=False, default=())


def select_scales(step, horizon):
    """Decomposition depth and kept bands for a forecast horizon."""
    if step <= 0 or horizon <= 0:
        raise DataError("step and horizon must be positive")
    if horizon % step != 0:
        raise DataError(f"horizon {horizon}s is not a multiple of the "
                        f"{step}s step")
    ratio = horizon // step
    if ratio < 2:
        raise HorizonTooShort(
            f"horizon of {ratio} step(s) leaves no dyadic band")
    return math.ceil(math.log2(ratio)), ("a1", "d1", "d2-", "d2+")


def _band_index(pyr, level, t0, length):
    pos = pyr.dyadic_position(level, t0)
    lo = min(max(int(math.floor(pos)), 0), length - 1)
    hi = min(max(int(math.ceil(pos)), 0), length - 1)
    return lo, hi


def build_vectors(pyr_temp, pyr_rh, pyr_wind, irr, horizon_steps,
                  scale=None):
    """Assemble 12-element coefficient rows and their aligned targets.

    `irr` is the normalized irradiance series the targets are read from;
    `scale` (when given) is kept so forecasts can be denormalized.
    """
    pyramids = (pyr_temp, pyr_rh, pyr_wind)
    n = len(irr)
    for pyr, name in zip(pyramids, CHANNEL_ORDER):
        if pyr.original_length != n:
            raise MisalignedSeries(
                f"{name} pyramid covers {pyr.original_length} samples, "
                f"irradiance has {n}")
        if pyr.levels < 2:
            raise BadLevels("need at least two decomposition levels")
    if horizon_steps < 1:
        raise DataError("horizon_steps must be >= 1")
    n_rows = n - horizon_steps - WARMUP_ROWS
    if n_rows < 1:
        raise InsufficientHistory(
            f"{n} samples cannot cover warmup {WARMUP_ROWS} plus "
            f"horizon {horizon_steps}")

    t0s = np.arange(n - horizon_steps)
    cols = []
    for pyr in pyramids:
        a1 = approximation_band(pyr, 1)
        d1 = pyr.band("d1")
        d2 = pyr.band("d2")
        i1 = np.array([_band_index(pyr, 1, t, len(a1))[0] for t in t0s])
        i2 = np.array([_band_index(pyr, 2, t, len(d2)) for t in t0s])
        cols.append(np.column_stack([a1[i1], d1[i1],
                                     d2[i2[:, 0]], d2[i2[:, 1]]]))
    rows = np.hstack(cols)

    band_map = tuple(f"{ch}:{b}" for ch in CHANNEL_ORDER
                     for b in VECTOR_BANDS)
    targets = irr.values[WARMUP_ROWS + horizon_steps:]
    return InputVectorSet(
        rows=rows[WARMUP_ROWS:], targets=np.asarray(targets, dtype=float),
        lead_rows=rows[:WARMUP_ROWS], band_map=band_map,
        horizon_steps=horizon_steps, step=irr.step,
        first_target_epoch=int(irr.start
                               + (WARMUP_ROWS + horizon_steps) * irr.step),
        scale=scale)


def build_mask(topology):
    """Structural mask: True where a weight is trainable."""
    p = topology.n_external
    n = topology.n_neurons
    h1, h2 = topology.hidden
    mask = np.zeros((n, p + 1 + n), dtype=bool)
    fb = p + 1                       # first feedback column
    mask[:, p] = True                # every neuron keeps its bias
    mask[0, fb + 1 + h1:fb + 1 + h1 + h2] = True      # h2 -> output
    mask[1:1 + h1, :p] = True                         # externals -> h1
    mask[1:1 + h1, fb + 0] = True                     # output feedback -> h1
    mask[1 + h1:1 + h1 + h2, fb + 1:fb + 1 + h1] = True   # h1 -> h2
    return mask


def assemble_wrnn(topology=None, family="bior3.7", eta=0.005, seed=0,
                  clip=1.0):
    """Masked recurrent realization of the layered forecaster."""
    topology = topology or WrnnTopology()
    filter_bank(family)     # validate the name; recorded for reports
    act = PerNeuron([(0, 1, Linear()),
                     (1, topology.n_neurons, RbfWavelet())])
    cfg = RnnConfig(n_external=topology.n_external,
                    n_neurons=topology.n_neurons,
                    eta=eta, activation=act, clip=clip)
    state = init_state(cfg, seed=seed, mask=build_mask(topology))
    return WrnnNet(cfg=cfg, state=state, topology=topology, family=family,
                   activation=act)


def _split_counts(n, split):
    if abs(sum(split) - 1.0) > 1e-9 or any(s <= 0 for s in split):
        raise UsageError(f"split fractions {split} must be positive and "
                         "sum to 1")
    n_train = int(math.floor(split[0] * n))
    n_val = int(math.floor(split[1] * n))
    n_test = n - n_train - n_val
    if min(n_train, n_val, n_test) < 1:
        raise InsufficientHistory(
            f"{n} usable rows cannot fill a {split} split")
    return n_train, n_val, n_test


def _run_span(net, ext, targets, learn):
    """One pass over a span; returns (mse, predictions)."""
    if learn:
        return train_span(net.state, net.cfg, ext, targets,
                          act=net.activation)
    # frozen-weight continuation: dynamics only, no sensitivity updates
    cfg = replace(net.cfg, eta=0.0)
    preds = np.empty(len(ext))
    for k in range(len(ext)):
        preds[k] = forward(net.state, cfg, ext[k], act=net.activation)[0]
    return float(np.mean((preds - targets) ** 2)), preds


def train_early_stopping(net, data, split=(0.7, 0.15, 0.15),
                         max_epochs=5000, patience=200, seed=0,
                         min_delta=0.0):
    """Early-stopped training; the report is computed on the test split.

    An epoch "improves" when validation MSE drops below the best so far
    by more than the relative margin `min_delta` (0 = any strict drop);
    `patience` consecutive non-improving epochs stop the run and the
    best-validation weights are restored.  `seed` is echoed into nothing
    here (the net carries its own seeded weights); it is accepted so
    sweep configs stay self-describing.
    """
    ext = data.delayed_matrix()
    targets = data.targets
    n_train, n_val, n_test = _split_counts(len(data), split)
    tr = slice(0, n_train)
    va = slice(n_train, n_train + n_val)
    te = slice(n_train + n_val, len(data))

    best_val = math.inf
    best_w = net.state.W.copy()
    best_epoch = 0
    fails = 0
    trace = []
    epoch = 0
    while epoch < max_epochs:
        epoch += 1
        reset_episode(net.state)
        train_mse, _ = _run_span(net, ext[tr], targets[tr], learn=True)
        val_mse, _ = _run_span(net, ext[va], targets[va], learn=False)
        if not (math.isfinite(train_mse) and math.isfinite(val_mse)):
            raise Diverged(f"epoch {epoch}: non-finite error")
        trace.append(train_mse)
        if val_mse < best_val * (1.0 - min_delta):
            best_val = val_mse
            best_w = net.state.W.copy()
            best_epoch = epoch
            fails = 0
        else:
            fails += 1
            if fails >= patience:
                break
    net.state.W = best_w.copy()

    reset_episode(net.state)
    _run_span(net, ext[tr], targets[tr], learn=False)
    _run_span(net, ext[va], targets[va], learn=False)
    _, pred = _run_span(net, ext[te], targets[te], learn=False)
    actual = targets[te]
    if data.scale is not None:
        pred = np.clip(data.scale.invert(pred), 0.0, IRRADIANCE_CEILING)
        actual = data.scale.invert(actual)
    return TrainReport(family=net.family,
                       neuron_count_2N=net.topology.hidden[0],
                       relative_rms_percent=relative_rms(pred, actual),
                       gamma=correlation(pred, actual),
                       epochs_to_converge=best_epoch,
                       mse_trace=tuple(trace))


def forecast(net, vectors, scale=None):
    """Closed-loop predictions over every usable row, denormalized."""
    scale = scale if scale is not None else vectors.scale
    ext = vectors.delayed_matrix()
    cfg = replace(net.cfg, eta=0.0)
    reset_episode(net.state)
    preds = np.empty(len(ext))
    for k in range(len(ext)):
        preds[k] = forward(net.state, cfg, ext[k], act=net.activation)[0]
    if scale is not None:
        preds = np.clip(scale.invert(preds), 0.0, IRRADIANCE_CEILING)
    return TimeSeries("irradiance", vectors.first_target_epoch,
                      vectors.step, preds)


# ----------------------------------------------------------------------
# whole-run conveniences


def prepare_vectors(channels, family, levels, horizon_steps, scales=None):
    """Normalize, decompose and align the four channels into vectors.

    `channels` maps channel name to its raw TimeSeries; all four are
    required and must share start, step and length.  `scales` (channel
    name -> ScaleParams) replays previously fitted normalizations, which
    is what forecasting from a checkpoint needs; omitted channels are
    fitted fresh.
    """
    needed = CHANNEL_ORDER + ("irradiance",)
    missing = [c for c in needed if c not in channels]
    if missing:
        raise DataError(f"missing channel(s): {', '.join(missing)}")
    scales = dict(scales or {})
    irr = channels["irradiance"]
    for name in CHANNEL_ORDER:
        ts = channels[name]
        if (ts.start, ts.step, len(ts)) != (irr.start, irr.step, len(irr)):
            raise MisalignedSeries(
                f"{name} grid differs from irradiance grid")
    bank = filter_bank(family)

    def scaled(name):
        if name in scales:
            return scales[name].apply(channels[name].values), scales[name]
        norm, params = normalize(channels[name])
        scales[name] = params
        return norm.values, params

    pyramids = []
    for name in CHANNEL_ORDER:
        vals, _ = scaled(name)
        pyramids.append(dwt(vals, bank, levels))
    irr_vals, scale = scaled("irradiance")
    irr_norm = TimeSeries("irradiance", irr.start, irr.step, irr_vals)
    vectors = build_vectors(*pyramids, irr_norm, horizon_steps, scale=scale)
    return vectors, scales


CHECKPOINT_VERSION = 1


def save_checkpoint(path, net, scales, levels, horizon_steps, step, seed=0):
    """Weights plus everything needed to rebuild the net and its scales.

    The archive is an ordinary .npz (zip of .npy members plus a JSON
    block) written with pinned member dates so identical runs produce
    byte-identical files.
    """
    meta = {
        "version": CHECKPOINT_VERSION,
        "family": net.family,
        "hidden": list(net.topology.hidden),
        "eta": net.cfg.eta,
        "clip": net.cfg.clip,
        "levels": int(levels),
        "horizon_steps": int(horizon_steps),
        "step": int(step),
        "seed": int(seed),
        "scales": {name: [p.offset, p.gain, p.lo, p.hi]
                   for name, p in (scales or {}).items()},
    }
    buf = io.BytesIO()
    np.save(buf, net.state.W)
    members = (("W.npy", buf.getvalue()),
               ("meta.json", json.dumps(meta, sort_keys=True).encode()))
    with zipfile.ZipFile(path, "w", zipfile.ZIP_STORED) as zf:
        for name, data in members:
            info = zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0))
            zf.writestr(info, data)


def load_checkpoint(path):
    """Rebuild (net, scales, meta) from :func:`save_checkpoint` output."""
    try:
        with zipfile.ZipFile(path) as zf:
            meta = json.loads(zf.read("meta.json"))
            W = np.load(io.BytesIO(zf.read("W.npy")))
    except (OSError, KeyError, zipfile.BadZipFile, json.JSONDecodeError) as exc:
        raise DataError(f"unreadable checkpoint {path}: {exc}") from exc
    if meta.get("version") != CHECKPOINT_VERSION:
        raise DataError(f"checkpoint version {meta.get('version')} "
                        f"not supported")
    topo = WrnnTopology(hidden=tuple(meta["hidden"]))
    net = assemble_wrnn(topo, family=meta["family"], eta=meta["eta"],
                        seed=meta["seed"], clip=meta["clip"])
    if W.shape != net.state.W.shape:
        raise DataError(f"checkpoint weights {W.shape} do not fit the "
                        f"{net.state.W.shape} topology")
    if np.any(W[~net.state.mask]):
        raise DataError("checkpoint has weight off the structural mask")
    net.state.W = W.astype(float)
    scales = {name: ScaleParams(*vals)
              for name, vals in meta["scales"].items()}
    return net, scales, meta


def run_single(channels, family, levels, horizon_steps, hidden=(16, 16),
               eta=0.005, seed=0, split=(0.7, 0.15, 0.15), max_epochs=5000,
               patience=200, min_delta=0.0):
    """Train one family end to end; returns (report, net, vectors, scales)."""
    vectors, scales = prepare_vectors(channels, family, levels,
                                      horizon_steps)
    topo = WrnnTopology(hidden=tuple(hidden))
    net = assemble_wrnn(topo, family=family, eta=eta, seed=seed)
    report = train_early_stopping(net, vectors, split=split,
                                  max_epochs=max_epochs, patience=patience,
                                  seed=seed, min_delta=min_delta)
    return report, net, vectors, scales


def _sweep_one(args):
    family, channels, kw = args
    try:
        report = run_single(channels, family, **kw)[0]
        return family, report, None
    except Exception as exc:   # collected, not fatal to the sweep
        return family, None, f"{type(exc).__name__}: {exc}"


def run_table1_sweep(families, channels, levels, horizon_steps,
                     hidden=(16, 16), table1_sizes=False, eta=0.005, seed=0,
                     split=(0.7, 0.15, 0.15), max_epochs=5000, patience=200,
                     min_delta=0.0, workers=1):
    """One report per family on shared data; failures are collected."""
    if not families:
        raise UsageError("need at least one family")
    jobs = []
    for family in families:
        kw = dict(levels=levels, horizon_steps=horizon_steps,
                  eta=eta, seed=seed, split=split, max_epochs=max_epochs,
                  patience=patience, min_delta=min_delta)
        if table1_sizes:
            m = filter_bank(family).vanishing_moments
            kw["hidden"] = (2 * m, 2 * m)
        else:
            kw["hidden"] = tuple(hidden)
        jobs.append((family, channels, kw))
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_sweep_one, jobs))
    else:
        results = [_sweep_one(j) for j in jobs]
    reports = [r for _, r, _ in results if r is not None]
    failures = {f: e for f, _, e in results if e is not None}
    return sorted(reports, key=lambda r: r.family), failures


def export_sweep_csv(reports, path):
    """Table-style report: one row per family, sorted."""
    lines = ["family,2N,relative_rms_percent,gamma,epochs"]
    for r in sorted(reports, key=lambda r: r.family):
        lines.append(f"{r.family},{r.neuron_count_2N},"
                     f"{r.relative_rms_percent!r},{r.gamma!r},"
                     f"{r.epochs_to_converge}")
    pathlib.Path(path).write_text("\n".join(lines) + "\n")
