"""Fully connected recurrent net trained online by real-time recurrent
learning (RTRL).

The net has N neurons, each fed the same input vector

    u(k) = [ external_1 .. external_p, 1, y_1(k-1) .. y_N(k-1) ]

so the weight matrix is N x (p + 1 + N) with the bias at column p and the
one-step feedback block last.  Neuron 1 (row 0) is the trained output; the
error is e(k) = s(k) - y_1(k) and weights move along +eta * e * pi^1,
where pi^j[n, l] tracks dy_j(k)/dw_{n,l} through the recursion

    pi^j(k) = phi'(v_j(k)) * ( delta_{jn} u_l(k) + sum_m w_{j, p+1+m} pi^m(k-1) ).

The sensitivities are advanced with the pre-update weights and the update
is applied afterwards, so with eta = 0 the pi tensor is the exact gradient
of a frozen-weight rollout (which is what the finite-difference tests pin
down).  An optional boolean mask freezes weights at zero, turning the
fully connected net into an arbitrary feed-forward-with-delays topology
without touching the learning rule.

Per-neuron activations are supported through :class:`PerNeuron`; the
wavelet-shaped :func:`rbf_wavelet` and the logistic sigmoid are the two
nonlinearities actually used by the forecasting pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, Diverged, LengthMismatch, NonFiniteActivation

GAMMA = math.sqrt(math.log(100.0))     # gaussian_bump(+-1) = 0.01


# ----------------------------------------------------------------------
# activations


def logistic(v, beta=1.0):
    return 1.0 / (1.0 + np.exp(-beta * np.asarray(v, dtype=float)))


def gaussian_bump(x):
    x = np.asarray(x, dtype=float)
    return np.exp(-((GAMMA * x) ** 2))


def rbf_wavelet(x):
    """Odd, 2-periodic wavelet shape built from two mirrored gaussian
    bumps: +gaussian_bump(2x+1) on (-1, 0), -gaussian_bump(2x-1) on (0, 1).
    Oddness plus 2-periodicity force the value 0 at every integer, which
    is also the jump midpoint; the +-0.01 jumps come from the bump tails
    and are accepted.  Integrates to zero over any whole period."""
    x = np.asarray(x, dtype=float)
    xi = np.mod(x + 1.0, 2.0) - 1.0
    out = np.where(xi < 0.0,
                   gaussian_bump(2.0 * xi + 1.0),
                   -gaussian_bump(2.0 * xi - 1.0))
    return np.where((xi == 0.0) | (xi == -1.0), 0.0, out)


def _rbf_wavelet_slope(x):
    x = np.asarray(x, dtype=float)
    xi = np.mod(x + 1.0, 2.0) - 1.0

    def dbump(t):
        return -2.0 * GAMMA * GAMMA * t * gaussian_bump(t)

    return np.where(xi < 0.0,
                    2.0 * dbump(2.0 * xi + 1.0),
                    -2.0 * dbump(2.0 * xi - 1.0))


class Logistic:
    def __init__(self, beta=1.0):
        self.beta = float(beta)

    def value(self, v):
        return logistic(v, self.beta)

    def slope(self, v):
        y = logistic(v, self.beta)
        return self.beta * y * (1.0 - y)


class Linear:
    def value(self, v):
        return np.asarray(v, dtype=float)

    def slope(self, v):
        return np.ones_like(np.asarray(v, dtype=float))


class RbfWavelet:
    def value(self, v):
        return rbf_wavelet(v)

    def slope(self, v):
        return _rbf_wavelet_slope(v)


class PerNeuron:
    """Different activation per contiguous neuron block."""

    def __init__(self, segments):
        # segments: [(start, stop, activation), ...] covering 0..N
        self.segments = list(segments)

    def value(self, v):
        out = np.empty_like(np.asarray(v, dtype=float))
        for a, b, act in self.segments:
            out[a:b] = act.value(v[a:b])
        return out

    def slope(self, v):
        out = np.empty_like(np.asarray(v, dtype=float))
        for a, b, act in self.segments:
            out[a:b] = act.slope(v[a:b])
        return out


def make_activation(spec, beta=1.0):
    if isinstance(spec, str):
        try:
            return {"logistic": Logistic(beta), "linear": Linear(),
                    "rbf_wavelet": RbfWavelet()}[spec]
        except KeyError:
            raise DataError(f"unknown activation {spec!r}") from None
    return spec


# ----------------------------------------------------------------------
# net state


@dataclass
class RnnConfig:
    n_external: int                  # p: external input taps
    n_neurons: int                   # N
    eta: float = 0.1
    beta: float = 1.0
    activation: object = "logistic"
    clip: float | None = 1.0         # max-norm limit on a weight update

    @property
    def n_columns(self):
        return self.n_external + 1 + self.n_neurons


@dataclass
class RnnState:
    W: np.ndarray                    # (N, p + 1 + N)
    y_prev: np.ndarray               # (N,)
    pi: np.ndarray                   # (N, N, L) full, or (N, n_pairs) packed
    step: int = 0
    mask: np.ndarray | None = None   # boolean, same shape as W
    # With a mask, frozen weights never move, so their sensitivity columns
    # are dead and pi is stored packed over the allowed (row, col) pairs
    # only.  The recursion is independent per weight, so packing is exact.
    pair_rows: np.ndarray | None = None
    pair_cols: np.ndarray | None = None
    pair_pos: np.ndarray | None = None


def init_state(cfg, seed, mask=None):
    rng = np.random.default_rng(seed)
    L = cfg.n_columns
    W = rng.uniform(-0.5, 0.5, size=(cfg.n_neurons, L)) / math.sqrt(L)
    if mask is None:
        return RnnState(W=W, y_prev=np.zeros(cfg.n_neurons),
                        pi=np.zeros((cfg.n_neurons, cfg.n_neurons, L)))
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != W.shape:
        raise LengthMismatch(
            f"mask shape {mask.shape} != weight shape {W.shape}")
    rows, cols = np.nonzero(mask)
    return RnnState(W=W * mask, y_prev=np.zeros(cfg.n_neurons),
                    pi=np.zeros((cfg.n_neurons, len(rows))),
                    mask=mask, pair_rows=rows, pair_cols=cols,
                    pair_pos=np.arange(len(rows)))


def reset_episode(state):
    """Clear temporal context (feedback and sensitivities), keep weights."""
    state.y_prev[:] = 0.0
    state.pi[:] = 0.0


def build_input(externals, y_prev):
    externals = np.asarray(externals, dtype=float)
    u = np.empty(len(externals) + 1 + len(y_prev))
    u[:len(externals)] = externals
    u[len(externals)] = 1.0
    u[len(externals) + 1:] = y_prev
    return u


def forward(state, cfg, externals, act=None):
    """Dynamics only: one step, no learning, no sensitivity propagation."""
    act = make_activation(cfg.activation if act is None else act, cfg.beta)
    u = build_input(externals, state.y_prev)
    if len(u) != cfg.n_columns:
        raise LengthMismatch(
            f"got {len(u)} input columns, weights expect {cfg.n_columns}")
    y = act.value(state.W @ u)
    if not np.all(np.isfinite(y)):
        raise NonFiniteActivation(f"non-finite activation at step {state.step}")
    state.y_prev = y
    state.step += 1
    return y


def rtrl_step(state, cfg, externals, target, act=None):
    """One online learning step; returns (output, error)."""
    act = make_activation(cfg.activation if act is None else act, cfg.beta)
    p = cfg.n_external
    N = cfg.n_neurons
    L = cfg.n_columns
    u = build_input(externals, state.y_prev)
    if len(u) != L:
        raise LengthMismatch(
            f"got {len(u)} input columns, weights expect {L}")
    with np.errstate(over="ignore", invalid="ignore"):
        v = state.W @ u
        y = act.value(v)
        if not np.all(np.isfinite(y)):
            raise NonFiniteActivation(
                f"non-finite activation at step {state.step}")

        # advance sensitivities with the pre-update weights
        w_fb = state.W[:, p + 1:]
        err = float(target) - y[0]
        if state.pair_rows is not None:
            prop = w_fb @ state.pi
            prop[state.pair_rows, state.pair_pos] += u[state.pair_cols]
            state.pi = act.slope(v)[:, None] * prop
            if cfg.eta != 0.0:
                dw = (cfg.eta * err) * state.pi[0]
                if cfg.clip is not None:
                    np.clip(dw, -cfg.clip, cfg.clip, out=dw)
                state.W[state.pair_rows, state.pair_cols] += dw
        else:
            prop = (w_fb @ state.pi.reshape(N, N * L)).reshape(N, N, L)
            idx = np.arange(N)
            prop[idx, idx, :] += u
            state.pi = act.slope(v)[:, None, None] * prop
            if cfg.eta != 0.0:
                dW = (cfg.eta * err) * state.pi[0]
                if cfg.clip is not None:
                    np.clip(dW, -cfg.clip, cfg.clip, out=dW)
                if state.mask is not None:
                    dW = dW * state.mask
                state.W = state.W + dW

    state.y_prev = y
    state.step += 1
    return y[0], err


def train_span(state, cfg, externals, targets, act=None):
    """Online learning over a whole span; returns (mse, predictions).

    Arithmetic matches calling :func:`rtrl_step` row by row; the packed
    masked path hoists dispatch out of the loop because the forecasting
    pipeline spends nearly all of its time here."""
    externals = np.asarray(externals, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if externals.ndim != 2 or externals.shape[1] != cfg.n_external:
        raise LengthMismatch(
            f"externals shape {externals.shape} does not provide "
            f"{cfg.n_external} inputs per step")
    if len(targets) != len(externals):
        raise LengthMismatch("targets length != externals length")
    act = make_activation(cfg.activation if act is None else act, cfg.beta)
    n_steps = len(targets)
    preds = np.empty(n_steps)
    if state.pair_rows is None:
        se = 0.0
        for k in range(n_steps):
            y0, err = rtrl_step(state, cfg, externals[k], targets[k],
                                act=act)
            preds[k] = y0
            se += err * err
        return float(se / max(n_steps, 1)), preds

    p = cfg.n_external
    W = state.W
    w_fb = W[:, p + 1:]          # live view; scatter updates keep it valid
    rows, cols, pos = state.pair_rows, state.pair_cols, state.pair_pos
    eta, clip = cfg.eta, cfg.clip
    u = np.empty(cfg.n_columns)
    u[p] = 1.0
    y_prev = state.y_prev
    pi = state.pi
    value, slope = act.value, act.slope
    se = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n_steps):
            u[:p] = externals[k]
            u[p + 1:] = y_prev
            v = W @ u
            y = value(v)
            if not np.all(np.isfinite(y)):
                raise NonFiniteActivation(
                    f"non-finite activation at step {state.step}")
            prop = w_fb @ pi
            prop[rows, pos] += u[cols]
            pi = slope(v)[:, None] * prop
            err = targets[k] - y[0]
            if eta != 0.0:
                dw = (eta * err) * pi[0]
                if clip is not None:
                    np.clip(dw, -clip, clip, out=dw)
                W[rows, cols] += dw
            y_prev = y
            preds[k] = y[0]
            se += err * err
            state.step += 1
    state.y_prev = y_prev
    state.pi = pi
    return float(se / max(n_steps, 1)), preds


def train_series(cfg, externals, teach, epochs, seed, state=None,
                 mask=None):
    """Run `epochs` sweeps of online RTRL over a fixed series.

    externals: (T, p) array of external input vectors, teach: (T,) targets.
    Feedback and sensitivities are cleared between epochs; weights carry
    over.  Returns (state, mse_trace) with one mean-squared error per
    epoch."""
    externals = np.asarray(externals, dtype=float)
    teach = np.asarray(teach, dtype=float)
    if externals.ndim != 2 or externals.shape[1] != cfg.n_external:
        raise LengthMismatch(
            f"externals shape {externals.shape} does not provide "
            f"{cfg.n_external} inputs per step")
    if len(teach) != len(externals):
        raise LengthMismatch("teach length != externals length")
    if state is None:
        state = init_state(cfg, seed, mask=mask)
    act = make_activation(cfg.activation, cfg.beta)
    trace = []
    for _ in range(int(epochs)):
        reset_episode(state)
        sq = 0.0
        with np.errstate(over="ignore", invalid="ignore"):
            for k in range(len(teach)):
                _, err = rtrl_step(state, cfg, externals[k], teach[k],
                                   act=act)
                sq += err * err
        mse = sq / max(len(teach), 1)
        if not math.isfinite(mse):
            raise Diverged(f"training diverged (epoch {len(trace) + 1})")
        trace.append(mse)
    return state, np.asarray(trace)
