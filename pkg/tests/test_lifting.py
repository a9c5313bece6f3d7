"""Lifting stages: phase split, prediction, fitting, exact inversion."""

import dataclasses

import numpy as np
import pytest

from wavecast.errors import (BadLevels, EmptyInput, InfeasibleConstraints,
                             LengthMismatch, SingularStage, StageMismatch,
                             TooShort)
from wavecast.filters import dwt, haar_bank
from wavecast.lifting import (LiftingStage, UPDATE_FIRST, apply_taps,
                              fit_predictor, fitted_builder, forward_stage,
                              haar_stage, interpolating_predictor,
                              inverse_stage, lifting_forward, lifting_inverse,
                              median_predictor, merge, predictor_design_matrix,
                              split, update_first_stage)


def test_split_keeps_trailing_sample_even():
    e, o = split(np.arange(5.0))
    np.testing.assert_array_equal(e, [0, 2, 4])
    np.testing.assert_array_equal(o, [1, 3])
    np.testing.assert_array_equal(merge(e, o), np.arange(5.0))


def test_split_merge_guards():
    with pytest.raises(EmptyInput):
        split([])
    with pytest.raises(LengthMismatch):
        merge(np.ones(2), np.ones(4))


def test_apply_taps_reflects_at_the_edge():
    # identity tap on the reflected window is a plain copy
    src = np.array([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(apply_taps([1.0], src, 3), src)
    # two forward taps: the last window reflects and sees x2 twice
    out = apply_taps([0.5, 0.5], src, 3)
    np.testing.assert_allclose(out, [1.5, 2.5, 3.0])


def test_haar_stage_two_samples_by_hand():
    c, d = forward_stage(np.array([2.0]), np.array([4.0]), haar_stage())
    np.testing.assert_array_equal(d, [2.0])   # 4 - 2
    np.testing.assert_array_equal(c, [3.0])   # 2 + 0.5 * 2


def test_haar_stage_averages_and_differences(rng):
    x = rng.normal(size=32)
    e, o = split(x)
    c, d = forward_stage(e, o, haar_stage())
    np.testing.assert_allclose(d, o - e, atol=1e-12)
    np.testing.assert_allclose(c, (e + o) / 2.0, atol=1e-12)
    eb, ob = inverse_stage(c, d, haar_stage())
    np.testing.assert_allclose(eb, e, atol=1e-12)
    np.testing.assert_allclose(ob, o, atol=1e-12)


def test_nonlinear_median_stage_inverts_exactly(rng):
    """Inversion only replays the ladder, so nonlinear predictors are fine."""
    x = rng.normal(size=40)
    e, o = split(x)
    stage = LiftingStage(predictor=median_predictor,
                         updater=np.array([0.5]), n_constraints=0, n_update=1)
    c, d = forward_stage(e, o, stage)
    eb, ob = inverse_stage(c, d, stage)
    np.testing.assert_allclose(merge(eb, ob), x, atol=1e-12)


def test_update_first_constant_by_hand():
    const = np.full(4, 2.0)
    c, d = update_first_stage(const, const, haar_stage())
    np.testing.assert_allclose(c, 3.0)   # e + 0.5 * o
    np.testing.assert_allclose(d, 1.0)   # c - e


def test_update_first_round_trip(rng):
    x = rng.normal(size=16)
    e, o = split(x)
    c, d = update_first_stage(e, o, haar_stage())
    stage = dataclasses.replace(haar_stage(), order=UPDATE_FIRST)
    eb, ob = inverse_stage(c, d, stage)
    np.testing.assert_allclose(eb, e, atol=1e-10)
    np.testing.assert_allclose(ob, o, atol=1e-10)


def test_update_first_rejects_uneven_phases():
    with pytest.raises(LengthMismatch):
        update_first_stage(np.ones(3), np.ones(2), haar_stage())


def test_update_first_singular_updater_is_reported(rng):
    # differencing taps sum to zero, so the update matrix kills constants
    stage = LiftingStage(predictor=np.array([1.0]),
                         updater=np.array([1.0, -1.0]),
                         n_constraints=0, n_update=0, order=UPDATE_FIRST)
    e, o = np.ones(4), rng.normal(size=4)
    c, d = forward_stage(e, o, stage)
    with pytest.raises(SingularStage):
        inverse_stage(c, d, stage)


def test_stage_order_must_be_known():
    bad = dataclasses.replace(haar_stage(), order="sideways")
    with pytest.raises(StageMismatch):
        forward_stage(np.ones(2), np.ones(2), bad)
    with pytest.raises(StageMismatch):
        inverse_stage(np.ones(2), np.ones(2), bad)


# ----------------------------------------------------------------------
# predictors


def test_interpolating_taps_by_hand():
    np.testing.assert_allclose(interpolating_predictor(2), [0.5, 0.5])
    np.testing.assert_allclose(interpolating_predictor(4),
                               np.array([-1.0, 9.0, 9.0, -1.0]) / 16.0)
    with pytest.raises(InfeasibleConstraints):
        interpolating_predictor(0)


def test_interpolating_taps_reproduce_cubics():
    t = np.linspace(0.0, 1.0, 64)
    x = 2.0 * t ** 3 - t ** 2 + 0.5 * t - 1.0
    e, o = split(x)
    pred = apply_taps(interpolating_predictor(4), e, len(o))
    # interior windows are exact; reflected edges are off-polynomial
    np.testing.assert_allclose(pred[2:-2], o[2:-2], atol=1e-12)


def test_design_matrix_interior_rows():
    e = np.arange(8.0)
    X, rows = predictor_design_matrix(e, 4, 8, interior_only=True)
    np.testing.assert_array_equal(rows, [1, 2, 3, 4, 5])
    assert X.shape == (5, 4)
    # each row is the centered window of even neighbours
    np.testing.assert_array_equal(X[0], [0.0, 1.0, 2.0, 3.0])
    full, all_rows = predictor_design_matrix(e, 4, 8)
    assert full.shape == (8, 4)
    np.testing.assert_array_equal(all_rows, np.arange(8))


def test_fit_recovers_a_predictable_band(rng):
    e = rng.normal(size=40)
    X, rows = predictor_design_matrix(e, 4, 39, interior_only=True)
    o = X @ interpolating_predictor(4)
    p = fit_predictor(o, X, n_constraints=2)
    np.testing.assert_allclose(X @ p, o, atol=1e-10)
    assert np.sum(p) == pytest.approx(1.0, abs=1e-12)


def test_fit_honours_moment_constraints(rng):
    X = rng.normal(size=(30, 4))
    y = rng.normal(size=30)
    p = fit_predictor(y, X, n_constraints=3)
    xi = np.array([-3.0, -1.0, 1.0, 3.0])
    assert np.sum(p) == pytest.approx(1.0, abs=1e-10)
    assert np.sum(p * xi) == pytest.approx(0.0, abs=1e-10)
    assert np.sum(p * xi ** 2) == pytest.approx(0.0, abs=1e-10)


def test_fully_constrained_fit_is_the_interpolator(rng):
    X = rng.normal(size=(12, 4))
    y = rng.normal(size=12)
    p = fit_predictor(y, X, n_constraints=4)
    np.testing.assert_allclose(p, interpolating_predictor(4), atol=1e-10)


def test_unconstrained_fit_is_plain_least_squares(rng):
    X = rng.normal(size=(20, 3))
    y = rng.normal(size=20)
    p = fit_predictor(y, X, n_constraints=0)
    expected, *_ = np.linalg.lstsq(X, y, rcond=None)
    np.testing.assert_allclose(p, expected, atol=1e-12)


def test_fit_guards():
    with pytest.raises(InfeasibleConstraints):
        fit_predictor(np.ones(5), np.ones((5, 2)), n_constraints=3)
    with pytest.raises(LengthMismatch):
        fit_predictor(np.ones(4), np.ones((5, 2)), n_constraints=1)


def test_fitted_taps_beat_fixed_haar_on_interior_details(rng):
    """The fit minimizes exactly the interior residual it is scored on."""
    t = np.linspace(0.0, 4.0, 128)
    for trial in range(5):
        x = np.sin(t * (1.0 + trial)) + 0.05 * rng.normal(size=t.size)
        e, o = split(x)
        X, rows = predictor_design_matrix(e, 4, len(o), interior_only=True)
        fitted = fit_predictor(o[rows], X, n_constraints=2)
        lagrange = interpolating_predictor(4)
        assert (np.sum((o[rows] - X @ fitted) ** 2)
                <= np.sum((o[rows] - X @ lagrange) ** 2) + 1e-12)


# ----------------------------------------------------------------------
# multi-level ladder


@pytest.mark.parametrize("n", [31, 32, 64, 100])
@pytest.mark.parametrize("levels", [1, 2, 4])
def test_haar_ladder_round_trip(n, levels, rng):
    x = rng.normal(size=n)
    pyr = lifting_forward(x, levels)
    np.testing.assert_allclose(lifting_inverse(pyr), x, atol=1e-10)


def test_fitted_ladder_round_trip(rng):
    x = np.cumsum(rng.normal(size=90))
    pyr = lifting_forward(x, 3, stage_builder=fitted_builder(2, 4))
    assert len(pyr.details) == 3
    np.testing.assert_allclose(lifting_inverse(pyr), x, atol=1e-9)


def test_ladder_guards(rng):
    with pytest.raises(EmptyInput):
        lifting_forward(np.array([]), 1)
    with pytest.raises(BadLevels):
        lifting_forward(np.ones(8), 0)
    with pytest.raises(TooShort):
        lifting_forward(np.ones(7), 3)
    pyr = lifting_forward(rng.normal(size=16), 2)
    broken = dataclasses.replace(pyr, stages=pyr.stages[:1])
    with pytest.raises(StageMismatch):
        lifting_inverse(broken)


def test_haar_ladder_agrees_with_haar_filter_bank(rng):
    """Same pyramid up to the per-level sqrt(2) renormalization."""
    x = rng.normal(size=64)
    levels = 3
    lift = lifting_forward(x, levels)
    bank = dwt(x, haar_bank(), levels)
    for j in range(1, levels + 1):
        scale = -np.sqrt(2.0) ** (j - 2)
        np.testing.assert_allclose(bank.details[j - 1],
                                   scale * lift.details[j - 1], atol=1e-12)
    np.testing.assert_allclose(bank.residue,
                               np.sqrt(2.0) ** levels * lift.residue,
                               atol=1e-12)
