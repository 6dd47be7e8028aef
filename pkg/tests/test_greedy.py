"""Tests for OMP and SOMP.

Selection is cross-checked by re-implementing one pursuit step directly
from its definition (argmax of aggregated normalized correlations), and
the refit by the least-squares orthogonality of the final residuals.
"""

import numpy as np
import pytest

from jointsparse.greedy import GreedyConfig, GreedyFit, omp, somp
from jointsparse.model import build_indicator, predict
from jointsparse.rng import PortableRng


def _reference_selection(X, M, weights, k):
    """Independent re-implementation of the selection sequence."""
    Xc = X - X.mean(axis=0)
    Mc = M - M.mean(axis=0)
    norms = np.linalg.norm(Xc, axis=0)
    w = weights / weights.sum()
    chosen = []
    for _ in range(k):
        if chosen:
            Q, _ = np.linalg.qr(Xc[:, chosen])
            R = Mc - Q @ (Q.T @ Mc)
        else:
            R = Mc
        corr = np.abs(Xc.T @ R) / norms[:, None]
        score = corr @ w
        score[chosen] = -np.inf
        chosen.append(int(np.argmax(score)))
    return chosen


def test_config_validation():
    with pytest.raises(ValueError):
        GreedyConfig(max_features=0)
    with pytest.raises(ValueError):
        GreedyConfig(max_features=2, residual_tol=-1.0)
    with pytest.raises(ValueError):
        GreedyConfig(max_features=2, residual_tol=np.inf)
    with pytest.raises(ValueError):
        GreedyConfig(max_features=2, aggregate="max")


def test_omp_recovers_planted_support_noiseless():
    rng = PortableRng(70)
    X = rng.normal(40 * 15).reshape(40, 15)
    c_true = np.zeros(15)
    c_true[[2, 9, 13]] = [1.5, -2.0, 1.0]
    y = X @ c_true + 4.0
    fit = omp(X, y, GreedyConfig(max_features=3))
    assert set(fit.support) == {2, 9, 13}
    np.testing.assert_allclose(predict(X, fit.coefficients)[:, 0], y, atol=1e-8)


def test_omp_selection_matches_reference():
    rng = PortableRng(71)
    X = rng.normal(30 * 12).reshape(30, 12)
    y = rng.normal(30)
    fit = omp(X, y, GreedyConfig(max_features=5))
    assert fit.support == _reference_selection(X, y[:, None], np.ones(1), 5)


def test_omp_final_residual_orthogonal_to_selection():
    rng = PortableRng(72)
    X = rng.normal(25 * 10).reshape(25, 10)
    y = rng.normal(25)
    fit = omp(X, y, GreedyConfig(max_features=4))
    Xc = X - X.mean(axis=0)
    yc = y - y.mean()
    r = yc - Xc @ fit.coefficients.weights[:, 0]
    for j in fit.support:
        ip = abs(float(Xc[:, j] @ r))
        assert ip <= 1e-8 * np.linalg.norm(Xc[:, j]) * max(np.linalg.norm(yc), 1.0)


def test_omp_residual_norms_non_increasing():
    rng = PortableRng(73)
    X = rng.normal(30 * 20).reshape(30, 20)
    y = rng.normal(30)
    fit = omp(X, y, GreedyConfig(max_features=8))
    norms = fit.residual_norms[:, 0]
    assert norms.shape == (9,)
    assert np.all(np.diff(norms) <= 1e-12)
    assert len(fit.scores) == len(fit.support) == 8


def test_omp_residual_tol_stops_early():
    rng = PortableRng(74)
    X = rng.normal(30 * 10).reshape(30, 10)
    y = X[:, 3] * 2.0 - X[:, 7] + 1.0
    fit = omp(X, y, GreedyConfig(max_features=6, residual_tol=1e-8))
    assert set(fit.support) == {3, 7}
    assert fit.residual_norms.shape == (3, 1)
    assert fit.residual_norms[-1, 0] <= 1e-8


def test_omp_input_validation():
    X = np.eye(4)
    with pytest.raises(ValueError):
        omp(X, np.ones(3), GreedyConfig(max_features=1))
    with pytest.raises(ValueError):
        omp(X, np.array([1.0, np.nan, 0.0, 0.0]), GreedyConfig(max_features=1))
    with pytest.raises(ValueError):
        omp(X, np.ones(4), GreedyConfig(max_features=5))


def test_budget_capped_by_rank_boundary():
    rng = PortableRng(75)
    X = rng.normal(6 * 12).reshape(6, 12)
    y = rng.normal(6)
    fit = omp(X, y, GreedyConfig(max_features=6))  # K == N
    assert len(fit.support) <= 6
    with pytest.raises(ValueError):
        omp(X, y, GreedyConfig(max_features=7))


def test_somp_single_column_is_omp_bitwise():
    rng = PortableRng(76)
    X = rng.normal(35 * 14).reshape(35, 14)
    y = rng.normal(35)
    a = omp(X, y, GreedyConfig(max_features=5))
    b = somp(X, y[:, None], GreedyConfig(max_features=5))
    assert a.support == b.support
    np.testing.assert_array_equal(a.coefficients.weights, b.coefficients.weights)
    np.testing.assert_array_equal(a.coefficients.biases, b.coefficients.biases)
    np.testing.assert_array_equal(a.residual_norms, b.residual_norms)
    np.testing.assert_array_equal(a.scores, b.scores)
    assert a.warnings == b.warnings


def test_somp_duplicated_tasks_scale_scores():
    """Stacking the same target L times keeps the path, scales scores by L."""
    rng = PortableRng(77)
    X = rng.normal(30 * 10).reshape(30, 10)
    y = rng.normal(30)
    a = omp(X, y, GreedyConfig(max_features=4))
    b = somp(X, np.repeat(y[:, None], 3, axis=1), GreedyConfig(max_features=4))
    assert a.support == b.support
    np.testing.assert_allclose(b.scores, 3.0 * a.scores, rtol=1e-12)
    np.testing.assert_allclose(b.coefficients.weights,
                               np.repeat(a.coefficients.weights, 3, axis=1),
                               atol=1e-12)


def test_somp_selection_matches_reference_with_weights():
    rng = PortableRng(78)
    X = rng.normal(40 * 16).reshape(40, 16)
    ind = build_indicator([0] * 20 + [1] * 12 + [2] * 8, 3)
    fit = somp(X, ind, GreedyConfig(max_features=6))
    ref = _reference_selection(X, ind.matrix, 1.0 / ind.class_counts, 6)
    assert fit.support == ref


def test_somp_recovers_shared_support():
    rng = PortableRng(79)
    N, d = 60, 30
    X = rng.normal(N * d).reshape(N, d)
    labels = [0] * 20 + [1] * 20 + [2] * 20
    for cls, feat in enumerate((3, 7, 11)):
        rows = slice(20 * cls, 20 * (cls + 1))
        X[rows, feat] += 3.0
    ind = build_indicator(labels, 3)
    fit = somp(X, ind, GreedyConfig(max_features=3))
    assert set(fit.support) == {3, 7, 11}


def test_somp_residual_norms_per_task_non_increasing():
    rng = PortableRng(80)
    X = rng.normal(40 * 20).reshape(40, 20)
    ind = build_indicator([0] * 15 + [1] * 15 + [None] * 10, 2)
    fit = somp(X, ind, GreedyConfig(max_features=7))
    assert fit.residual_norms.shape == (8, 2)
    assert np.all(np.diff(fit.residual_norms, axis=0) <= 1e-12)


def test_somp_indicator_weighting_can_flip_selection():
    # feature 0 tracks the common class, feature 1 the rare one; the
    # rare-class correlation wins only after the 1/N_l reweighting
    # (background rows keep the centered indicator columns from being
    # perfectly anticorrelated, which would make the two features tie)
    rng = PortableRng(81)
    N = 60
    labels = [0] * 32 + [1] * 8 + [None] * 20
    ind = build_indicator(labels, 2)
    X = 0.01 * rng.normal(N * 2).reshape(N, 2)
    X[:, 0] += ind.matrix[:, 0]
    X[:, 1] += ind.matrix[:, 1]
    weighted = somp(X, ind, GreedyConfig(max_features=1))
    plain = somp(X, ind.matrix, GreedyConfig(max_features=1))
    assert weighted.support != plain.support


def test_somp_plain_matrix_shape_errors():
    X = np.eye(5)
    with pytest.raises(ValueError):
        somp(X, np.ones((4, 2)), GreedyConfig(max_features=1))
    with pytest.raises(ValueError):
        somp(X, np.full((5, 2), np.inf), GreedyConfig(max_features=1))


def test_aggregate_variants_run_and_differ_in_scores():
    rng = PortableRng(82)
    X = rng.normal(30 * 12).reshape(30, 12)
    ind = build_indicator([0] * 10 + [1] * 10 + [2] * 10, 3)
    fits = {agg: somp(X, ind, GreedyConfig(max_features=4, aggregate=agg))
            for agg in ("l1", "l2", "linf")}
    for fit in fits.values():
        assert len(fit.support) == 4
    assert not np.allclose(fits["l1"].scores, fits["l2"].scores)


def test_normalize_columns_off_prefers_large_norms():
    rng = PortableRng(83)
    X = rng.normal(50 * 3).reshape(50, 3)
    y = X[:, 2] + 0.05 * rng.normal(50)
    X[:, 0] *= 40.0  # huge norm, weak direction
    on = omp(X, y, GreedyConfig(max_features=1))
    off = omp(X, y, GreedyConfig(max_features=1, normalize_columns=False))
    assert on.support == [2]
    assert off.support != on.support


def test_collinear_column_is_dropped_with_warning():
    rng = PortableRng(84)
    a = rng.normal(8)
    b = rng.normal(8)
    X = np.column_stack([a, b, a + b])
    y = rng.normal(8)
    fit = omp(X, y, GreedyConfig(max_features=3))
    assert len(fit.support) == 2
    assert any("collinear" in w for w in fit.warnings)


def test_constant_column_never_selected():
    rng = PortableRng(85)
    X = rng.normal(20 * 4).reshape(20, 4)
    X[:, 1] = 7.0  # zero after centering
    y = rng.normal(20)
    fit = omp(X, y, GreedyConfig(max_features=3))
    assert 1 not in fit.support


def test_predicted_means_match_response_means():
    rng = PortableRng(86)
    X = rng.normal(30 * 8).reshape(30, 8)
    ind = build_indicator([0] * 12 + [1] * 12 + [None] * 6, 2)
    fit = somp(X, ind, GreedyConfig(max_features=3))
    np.testing.assert_allclose(predict(X, fit.coefficients).mean(axis=0),
                               ind.matrix.mean(axis=0), atol=1e-12)


def test_greedyfit_fields():
    fit = omp(np.eye(3), np.array([1.0, 0.0, 0.0]), GreedyConfig(max_features=1))
    assert isinstance(fit, GreedyFit)
    assert isinstance(fit.support, list)
    assert fit.scores.shape == (len(fit.support),)
