"""Tests for the projection and proximal operators.

The max-norm prox is checked against a scalar oracle: the minimizer of
0.5||u - v||^2 + t||u||_inf is a clip of v at some level m >= 0, and the
optimal level minimizes a one-dimensional convex function that a ternary
search can locate to machine precision.
"""

import numpy as np
import pytest

from jointsparse.prox import (
    project_l1_ball,
    prox_l2_rows,
    prox_linf,
    prox_linf_rows,
)
from jointsparse.rng import PortableRng


def _prox_linf_oracle(v, t):
    v = np.asarray(v, dtype=np.float64)
    mags = np.abs(v)

    def phi(m):
        return 0.5 * np.sum(np.maximum(mags - m, 0.0) ** 2) + t * m

    lo, hi = 0.0, float(mags.max(initial=0.0))
    for _ in range(200):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if phi(m1) <= phi(m2):
            hi = m2
        else:
            lo = m1
    m = 0.5 * (lo + hi)
    return np.clip(v, -m, m)


def test_project_l1_ball_textbook_case():
    np.testing.assert_allclose(project_l1_ball(np.array([3.0, 1.0]), 2.0), [2.0, 0.0])


def test_project_l1_ball_interior_point_returned_as_copy():
    v = np.array([0.3, -0.4])
    p = project_l1_ball(v, 1.0)
    np.testing.assert_array_equal(p, v)
    assert p is not v


def test_project_l1_ball_zero_radius_and_errors():
    np.testing.assert_array_equal(project_l1_ball(np.array([1.0, -2.0]), 0.0), [0.0, 0.0])
    with pytest.raises(ValueError):
        project_l1_ball(np.array([1.0]), -0.1)


def test_project_l1_ball_feasibility_and_idempotence():
    rng = PortableRng(60)
    for _ in range(50):
        n = 1 + rng.below(12)
        v = rng.normal(n) * 3.0
        r = rng.uniform(1)[0] * 4.0
        p = project_l1_ball(v, r)
        assert np.abs(p).sum() <= r + 1e-12
        assert np.all(np.sign(p) * np.sign(v) >= 0.0)
        np.testing.assert_allclose(project_l1_ball(p, r), p, atol=1e-12)


def test_project_l1_ball_is_the_closest_point():
    # compare against a dense search over soft thresholds
    rng = PortableRng(61)
    v = rng.normal(6)
    r = 1.7
    p = project_l1_ball(v, r)
    best = np.inf
    for theta in np.linspace(0.0, np.abs(v).max(), 20001):
        cand = np.sign(v) * np.maximum(np.abs(v) - theta, 0.0)
        if np.abs(cand).sum() <= r + 1e-9:
            best = min(best, float(np.sum((cand - v) ** 2)))
    assert float(np.sum((p - v) ** 2)) <= best + 1e-9


def test_prox_linf_scalar_soft_threshold():
    # for a single coordinate the max norm is the absolute value
    np.testing.assert_allclose(prox_linf(np.array([5.0]), 2.0), [3.0])
    np.testing.assert_allclose(prox_linf(np.array([-5.0]), 2.0), [-3.0])
    np.testing.assert_allclose(prox_linf(np.array([1.0]), 2.0), [0.0])


def test_prox_linf_matches_ternary_search_oracle():
    rng = PortableRng(62)
    for _ in range(60):
        n = 1 + rng.below(10)
        v = rng.normal(n) * 2.0
        t = rng.uniform(1)[0] * 3.0
        np.testing.assert_allclose(prox_linf(v, t), _prox_linf_oracle(v, t), atol=1e-6)


def test_prox_linf_moreau_identity_is_exact():
    rng = PortableRng(63)
    for _ in range(40):
        n = 2 + rng.below(9)
        v = rng.normal(n) * 4.0
        t = rng.uniform(1)[0] * 2.0
        np.testing.assert_array_equal(prox_linf(v, t) + project_l1_ball(v, t), v)


def test_prox_linf_extremes():
    v = np.array([2.0, -1.0, 0.5])
    np.testing.assert_array_equal(prox_linf(v, 0.0), v)
    # once t reaches ||v||_1 the prox collapses to zero
    np.testing.assert_allclose(prox_linf(v, 3.5), [0.0, 0.0, 0.0])
    np.testing.assert_allclose(prox_linf(v, 10.0), [0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        prox_linf(v, -1.0)


def test_prox_linf_rows_matches_per_row_calls():
    rng = PortableRng(64)
    V = rng.normal(7 * 5).reshape(7, 5) * 3.0
    V[2] = 0.0
    V[3] = np.array([0.01, -0.02, 0.0, 0.01, 0.0])  # well inside the ball
    V[4, :2] = V[4, 2]  # exact magnitude ties
    for t in (0.0, 0.05, 1.0, 4.0):
        rows = np.stack([prox_linf(V[i], t) for i in range(V.shape[0])])
        np.testing.assert_array_equal(prox_linf_rows(V, t), rows)
    with pytest.raises(ValueError):
        prox_linf_rows(V, -0.5)


def test_prox_l2_rows_hand_values():
    V = np.array([[3.0, 4.0], [0.0, 0.0], [0.3, 0.4]])
    got = prox_l2_rows(V, 2.5)
    np.testing.assert_allclose(got[0], [1.5, 2.0])
    np.testing.assert_array_equal(got[1], [0.0, 0.0])
    np.testing.assert_array_equal(got[2], [0.0, 0.0])  # norm 0.5 <= t
    np.testing.assert_array_equal(prox_l2_rows(V, 0.0), V)
    with pytest.raises(ValueError):
        prox_l2_rows(V, -1.0)


def test_prox_l2_rows_shrinks_norms_by_t():
    rng = PortableRng(65)
    V = rng.normal(6 * 4).reshape(6, 4)
    t = 0.3
    before = np.linalg.norm(V, axis=1)
    after = np.linalg.norm(prox_l2_rows(V, t), axis=1)
    np.testing.assert_allclose(after, np.maximum(before - t, 0.0), atol=1e-12)
