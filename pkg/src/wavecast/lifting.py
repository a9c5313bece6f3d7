"""Second-generation wavelet transform built from lifting steps.

Each stage splits a signal into even/odd phases, predicts the odd phase
from the even one (detail d = odd - P(even)) and updates the even phase
with a fraction of the detail (coarse c = even + U(d)).  Inversion just
replays the two steps backwards, so any predictor or updater - fitted,
clamped, median, whatever - inverts exactly; nothing about P or U needs
to be linear.

Predictors and updaters are either tap vectors applied on a centered
window with half-sample reflection at the ends, or arbitrary callables
``f(source_array, n_out) -> np.ndarray``.  Tap vectors of length M sit at
even-grid offsets off..off+M-1 with off = -((M-1)//2); relative to the
odd sample being predicted the tap abscissae are xi_j = 2*(off+j) - 1,
which is what the polynomial moment constraints in :func:`fit_predictor`
are written against.

An update-first stage order is also provided: c = even + U(odd) followed
by d = c - P(even), exactly in that dataflow.  Note that with this order
the odd phase never enters d directly, so inversion is only possible when
P and U act as nonsingular linear operators; :func:`inverse_stage` then
solves the two small linear systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (BadLevels, EmptyInput, InfeasibleConstraints,
                     LengthMismatch, RankDeficient, SingularStage,
                     StageMismatch, TooShort)

PREDICT_FIRST = "predict_first"
UPDATE_FIRST = "update_first"


@dataclass(frozen=True)
class LiftingStage:
    predictor: object               # tap vector or callable
    updater: object                 # tap vector or callable
    n_constraints: int = 0          # moment constraints used by a fit
    n_update: int = 0               # moment order the updater preserves
    order: str = PREDICT_FIRST


@dataclass(frozen=True)
class LiftingPyramid:
    levels: int
    original_length: int
    residue: np.ndarray
    details: tuple                  # d1..dJ, finest first
    stages: tuple                   # LiftingStage per level
    level_lengths: tuple


# ----------------------------------------------------------------------
# phase split / merge


def split(x):
    """Even and odd phases; an odd-length trailing sample stays even."""
    x = np.asarray(x, dtype=float)
    if len(x) == 0:
        raise EmptyInput("cannot split an empty signal")
    return x[0::2].copy(), x[1::2].copy()


def merge(x_even, x_odd):
    if not len(x_even) - len(x_odd) in (0, 1):
        raise LengthMismatch(
            f"phases of length {len(x_even)}/{len(x_odd)} do not interleave")
    out = np.empty(len(x_even) + len(x_odd))
    out[0::2] = x_even
    out[1::2] = x_odd
    return out


# ----------------------------------------------------------------------
# tap application with reflected ends


def _reflect(idx, n):
    # half-sample symmetry: ..., x1, x0 | x0, x1, ..., x_{n-1} | x_{n-1}, ...
    idx = np.asarray(idx)
    period = 2 * n
    idx = np.mod(idx, period)
    return np.where(idx < n, idx, period - 1 - idx)


def _tap_offset(m):
    return -((m - 1) // 2)


def apply_taps(taps, source, n_out):
    """Correlate `taps` against `source` on the centered reflected window."""
    taps = np.asarray(taps, dtype=float)
    if len(source) == 0:
        raise EmptyInput("no samples to apply taps to")
    off = _tap_offset(len(taps))
    out = np.zeros(n_out)
    base = np.arange(n_out)
    for j, c in enumerate(taps):
        out += c * source[_reflect(base + off + j, len(source))]
    return out


def _apply(op, source, n_out):
    if callable(op):
        got = np.asarray(op(np.asarray(source, dtype=float), n_out),
                         dtype=float)
        if got.shape != (n_out,):
            raise StageMismatch(
                f"operator returned shape {got.shape}, wanted ({n_out},)")
        return got
    return apply_taps(op, source, n_out)


def _op_matrix(op, n):
    """Dense matrix of a linear tap operator acting on length-n vectors."""
    if callable(op):
        raise StageMismatch("cannot build a matrix for a callable operator")
    taps = np.asarray(op, dtype=float)
    mat = np.zeros((n, n))
    off = _tap_offset(len(taps))
    rows = np.arange(n)
    for j, c in enumerate(taps):
        cols = _reflect(rows + off + j, n)
        np.add.at(mat, (rows, cols), c)
    return mat


# ----------------------------------------------------------------------
# single stage forward / inverse


def predict_step(x_odd, x_even, predictor):
    return np.asarray(x_odd, dtype=float) - _apply(predictor, x_even,
                                                   len(x_odd))


def update_step(x_even, d, updater):
    return np.asarray(x_even, dtype=float) + _apply(updater, d, len(x_even))


def forward_stage(x_even, x_odd, stage):
    if stage.order == PREDICT_FIRST:
        d = predict_step(x_odd, x_even, stage.predictor)
        c = update_step(x_even, d, stage.updater)
        return c, d
    if stage.order == UPDATE_FIRST:
        c = update_step(x_even, x_odd, stage.updater)
        d = c - _apply(stage.predictor, x_even, len(c))
        return c, d
    raise StageMismatch(f"unknown stage order {stage.order!r}")


def update_first_stage(x_even, x_odd, stage):
    """Update-then-predict dataflow: c = e + U(o), then d = c - P(e)."""
    if len(x_even) != len(x_odd):
        raise LengthMismatch("update-first stages need equal phase lengths")
    st = LiftingStage(stage.predictor, stage.updater, stage.n_constraints,
                      stage.n_update, UPDATE_FIRST)
    return forward_stage(x_even, x_odd, st)


def inverse_stage(c, d, stage):
    c = np.asarray(c, dtype=float)
    d = np.asarray(d, dtype=float)
    if stage.order == PREDICT_FIRST:
        if len(c) - len(d) not in (0, 1):
            raise StageMismatch(
                f"bands of length {len(c)}/{len(d)} cannot come from one "
                "predict-first stage")
        x_even = c - _apply(stage.updater, d, len(c))
        x_odd = d + _apply(stage.predictor, x_even, len(d))
        return x_even, x_odd
    if stage.order == UPDATE_FIRST:
        if len(c) != len(d):
            raise StageMismatch("update-first bands must have equal length")
        n = len(c)
        pm = _op_matrix(stage.predictor, n)
        um = _op_matrix(stage.updater, n)
        try:
            x_even = np.linalg.solve(pm, c - d)
            x_odd = np.linalg.solve(um, c - x_even)
        except np.linalg.LinAlgError as exc:
            raise SingularStage(
                "update-first stage is not invertible: " + str(exc)) from exc
        return x_even, x_odd
    raise StageMismatch(f"unknown stage order {stage.order!r}")


# ----------------------------------------------------------------------
# predictors


def interpolating_predictor(m_taps):
    """Lagrange taps that reproduce degree-(m_taps-1) polynomials."""
    if m_taps < 1:
        raise InfeasibleConstraints("need at least one tap")
    off = _tap_offset(m_taps)
    xi = 2.0 * (off + np.arange(m_taps)) - 1.0
    taps = np.ones(m_taps)
    for j in range(m_taps):
        for i in range(m_taps):
            if i != j:
                taps[j] *= (0.0 - xi[i]) / (xi[j] - xi[i])
    return taps


def median_predictor(x_even, n_out):
    """Median of the three reflected even neighbours; deliberately
    nonlinear, used to exercise exact inversion of nonlinear stages."""
    n = len(x_even)
    base = np.arange(n_out)
    cols = [x_even[_reflect(base + k, n)] for k in (-1, 0, 1)]
    return np.median(np.stack(cols), axis=0)


def predictor_design_matrix(x_even, m_taps, n_rows, interior_only=False):
    """Rows of lagged even samples feeding an m_taps predictor.

    Returns (X, rows) where rows holds the odd-band indices each row
    predicts.  With interior_only=True, rows whose window would need
    boundary reflection are dropped (this is the matrix a fit should see;
    reflected samples are off-polynomial and would bias it).
    """
    x_even = np.asarray(x_even, dtype=float)
    off = _tap_offset(m_taps)
    rows = np.arange(n_rows)
    if interior_only:
        rows = rows[(rows + off >= 0)
                    & (rows + off + m_taps - 1 <= len(x_even) - 1)]
    X = np.empty((len(rows), m_taps))
    for j in range(m_taps):
        X[:, j] = x_even[_reflect(rows + off + j, len(x_even))]
    return X, rows


def fit_predictor(x_odd, design, n_constraints):
    """Least-squares taps subject to polynomial reproduction constraints.

    Minimizes ||x_odd - design @ p|| over p with sum_j p_j xi_j^m = [m == 0]
    for m < n_constraints, solved by eliminating the constraints through
    the nullspace of the constraint matrix.  n_constraints = 1 pins
    sum(p) = 1; higher orders make the detail vanish on polynomials of
    matching degree.
    """
    y = np.asarray(x_odd, dtype=float)
    X = np.asarray(design, dtype=float)
    if X.ndim != 2 or len(y) != X.shape[0]:
        raise LengthMismatch(
            f"design is {X.shape}, targets have length {len(y)}")
    m_taps = X.shape[1]
    if n_constraints > m_taps:
        raise InfeasibleConstraints(
            f"{n_constraints} moment constraints exceed {m_taps} taps")
    if n_constraints == 0:
        p, *_ = np.linalg.lstsq(X, y, rcond=None)
        return p

    off = _tap_offset(m_taps)
    xi = 2.0 * (off + np.arange(m_taps)) - 1.0
    C = np.vstack([xi ** m for m in range(n_constraints)])
    b = np.zeros(n_constraints)
    b[0] = 1.0
    u, s, vt = np.linalg.svd(C)
    rank = int(np.sum(s > s[0] * max(C.shape) * np.finfo(float).eps))
    if rank < n_constraints:
        raise RankDeficient("moment constraints are linearly dependent")
    p0 = np.linalg.pinv(C) @ b
    if rank == m_taps:
        return p0                      # constraints determine p completely
    Z = vt[rank:].T                    # nullspace basis of C
    q, *_ = np.linalg.lstsq(X @ Z, y - X @ p0, rcond=None)
    return p0 + Z @ q


# ----------------------------------------------------------------------
# stage builders and multi-level transform


def haar_stage():
    return LiftingStage(predictor=np.array([1.0]), updater=np.array([0.5]),
                        n_constraints=1, n_update=1)


def fixed_haar_builder(x_even, x_odd, level):
    return haar_stage()


def fitted_builder(n_constraints, m_taps):
    """Stage builder that refits the predictor to each level's data.

    The updater stays at the Haar half so energy comparisons against the
    fixed-Haar transform isolate the predictor.  Fitting sees interior
    windows only; if a level is too short to have any, the interpolating
    taps are used as-is.
    """
    def build(x_even, x_odd, level):
        X, rows = predictor_design_matrix(x_even, m_taps, len(x_odd),
                                          interior_only=True)
        if len(rows) >= m_taps:
            p = fit_predictor(np.asarray(x_odd, dtype=float)[rows], X,
                              n_constraints)
        else:
            p = interpolating_predictor(m_taps)
        return LiftingStage(predictor=p, updater=np.array([0.5]),
                            n_constraints=n_constraints, n_update=1)
    return build


def lifting_forward(x, levels, stage_builder=fixed_haar_builder):
    x = np.asarray(x, dtype=float)
    if len(x) == 0:
        raise EmptyInput("empty signal")
    if levels < 1:
        raise BadLevels(f"levels must be >= 1, got {levels}")
    if len(x) < 2 ** levels:
        raise TooShort(
            f"signal of length {len(x)} cannot support {levels} levels")
    details, stages, lengths = [], [], []
    cur = x
    for level in range(1, levels + 1):
        lengths.append(len(cur))
        x_even, x_odd = split(cur)
        stage = stage_builder(x_even, x_odd, level)
        c, d = forward_stage(x_even, x_odd, stage)
        details.append(d)
        stages.append(stage)
        cur = c
    return LiftingPyramid(levels=levels, original_length=len(x),
                          residue=cur, details=tuple(details),
                          stages=tuple(stages), level_lengths=tuple(lengths))


def lifting_inverse(pyr):
    if len(pyr.details) != pyr.levels or len(pyr.stages) != pyr.levels:
        raise StageMismatch("stage/band count does not match level count")
    cur = np.asarray(pyr.residue, dtype=float)
    for j in range(pyr.levels - 1, -1, -1):
        x_even, x_odd = inverse_stage(cur, pyr.details[j], pyr.stages[j])
        cur = merge(x_even, x_odd)
        if len(cur) != pyr.level_lengths[j]:
            raise StageMismatch(f"level {j + 1} reconstructs to {len(cur)} "
                                f"samples, recorded {pyr.level_lengths[j]}")
    return cur
