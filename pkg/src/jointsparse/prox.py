"""Proximal and projection operators used by the convex solvers."""

from __future__ import annotations

import numpy as np


def project_l1_ball(v, radius: float) -> np.ndarray:
    """Euclidean projection of v onto {u : ||u||_1 <= radius}.

    Sorting-based soft-threshold search (Duchi et al. style): if v is
    already inside the ball it is returned unchanged, otherwise the unique
    threshold theta > 0 with ||soft(v, theta)||_1 = radius is located from
    the sorted magnitudes. Signs are preserved.
    """
    v = np.asarray(v, dtype=np.float64)
    if radius < 0:
        raise ValueError("radius must be >= 0")
    mags = np.abs(v)
    if mags.sum() <= radius:
        return v.copy()
    if radius == 0.0:
        return np.zeros_like(v)
    s = np.sort(mags)[::-1]
    csum = np.cumsum(s)
    counts = np.arange(1, s.size + 1)
    # largest k with s[k-1] > (csum[k-1] - radius) / k
    valid = s > (csum - radius) / counts
    k = int(np.nonzero(valid)[0][-1]) + 1
    theta = (csum[k - 1] - radius) / k
    return np.sign(v) * np.maximum(mags - theta, 0.0)


def prox_linf(v, t: float) -> np.ndarray:
    """prox of t * max-magnitude: argmin_u 1/2 ||u - v||^2 + t ||u||_inf.

    Computed through the Moreau decomposition, v minus the projection of v
    onto the l1 ball of radius t, so prox_linf(v, t) + project_l1_ball(v, t)
    reassembles v exactly.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    v = np.asarray(v, dtype=np.float64)
    return v - project_l1_ball(v, t)


def prox_linf_rows(V, t: float) -> np.ndarray:
    """Row-batched :func:`prox_linf` for a (d, L) matrix, vectorized.

    Equivalent to applying prox_linf to every row with the same t.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    V = np.asarray(V, dtype=np.float64)
    if t == 0.0:
        return V.copy()
    mags = np.abs(V)
    s = -np.sort(-mags, axis=1)
    csum = np.cumsum(s, axis=1)
    counts = np.arange(1, V.shape[1] + 1)[None, :]
    valid = s > (csum - t) / counts
    # rows inside the l1 ball project to themselves (prox gives zero row)
    inside = mags.sum(axis=1) <= t
    k = valid.shape[1] - np.argmax(valid[:, ::-1], axis=1)
    theta = (np.take_along_axis(csum, k[:, None] - 1, axis=1)[:, 0] - t) / k
    proj = np.sign(V) * np.maximum(mags - theta[:, None], 0.0)
    proj[inside] = V[inside]
    return V - proj


def prox_l2_rows(V, t: float) -> np.ndarray:
    """Row-wise group soft threshold: each row scaled by (1 - t/||row||_2)+."""
    if t < 0:
        raise ValueError("t must be >= 0")
    V = np.asarray(V, dtype=np.float64)
    norms = np.sqrt((V * V).sum(axis=1))
    scale = np.zeros_like(norms)
    nz = norms > 0.0
    scale[nz] = np.maximum(0.0, 1.0 - t / norms[nz])
    return V * scale[:, None]
