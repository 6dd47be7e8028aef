"""Greedy pursuit solvers: OMP and its shared-support variant SOMP.

Both center the data so the unpenalized bias drops out, select columns
by correlation with the residual, and refit by least squares so every
task residual is orthogonal to the selected span.  SOMP keeps one
support for all tasks and aggregates per-task correlations with weights
1/N_l when given an indicator response (unit weights for plain target
matrices, which makes the single-column case coincide with omp exactly).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import Coefficients, check_data_matrix

__all__ = ["GreedyConfig", "GreedyFit", "omp", "somp"]

_AGGREGATES = ("l1", "l2", "linf")


@dataclass(frozen=True)
class GreedyConfig:
    """max_features is the sparsity budget K; residual_tol stops early
    once every task residual norm falls below it.  Selection scores use
    unit-normalized columns unless normalize_columns is off; aggregate
    picks how per-task correlations combine in somp (l1 matches the
    weighted loss, l2 and linf are for experimentation).
    """

    max_features: int
    residual_tol: float = 0.0
    normalize_columns: bool = True
    aggregate: str = "l1"

    def __post_init__(self):
        if self.max_features < 1:
            raise ValueError("max_features must be at least 1")
        if not np.isfinite(self.residual_tol) or self.residual_tol < 0:
            raise ValueError("residual_tol must be finite and non-negative")
        if self.aggregate not in _AGGREGATES:
            raise ValueError("aggregate must be one of %s" % (_AGGREGATES,))


@dataclass
class GreedyFit:
    support: list
    coefficients: Coefficients
    residual_norms: np.ndarray
    scores: np.ndarray
    warnings: list = field(default_factory=list)


def _aggregate_scores(corr_scaled, w_norm, aggregate):
    if aggregate == "l1":
        return np.abs(corr_scaled) @ w_norm
    if aggregate == "l2":
        return np.sqrt((corr_scaled * corr_scaled) @ w_norm)
    return np.max(np.abs(corr_scaled) * w_norm, axis=1)


def _pursuit(X, M, weights, cfg: GreedyConfig) -> GreedyFit:
    N, d = X.shape
    L = M.shape[1]
    K = cfg.max_features
    if K > min(N, d):
        raise ValueError("max_features exceeds min(n_samples, n_columns)")

    x_mean = X.mean(axis=0)
    m_mean = M.mean(axis=0)
    Xc = X - x_mean
    Mc = M - m_mean

    col_norms = np.sqrt(np.einsum("ij,ij->j", Xc, Xc))
    if cfg.normalize_columns:
        inv_norms = np.divide(1.0, col_norms,
                              out=np.zeros_like(col_norms),
                              where=col_norms > 0)
    else:
        inv_norms = np.ones(d)

    sum_w = float(weights.sum())
    w_norm = weights / sum_w

    R = Mc.copy()
    Q = np.empty((N, 0))
    support: list[int] = []
    scores: list[float] = []
    warnings: list[str] = []
    norms_trace = [np.sqrt(np.einsum("ij,ij->j", R, R))]
    blocked = np.zeros(d, dtype=bool)

    while len(support) < K:
        if norms_trace[-1].max() <= cfg.residual_tol:
            break
        corr = (Xc.T @ R) * inv_norms[:, None]
        cand = _aggregate_scores(corr, w_norm, cfg.aggregate)
        cand[blocked] = -1.0
        j = -1
        while True:
            best = int(np.argmax(cand))
            if cand[best] <= 0.0:
                break
            v = Xc[:, best].copy()
            # modified Gram-Schmidt with one reorthogonalization pass
            for _ in range(2):
                if Q.shape[1]:
                    v -= Q @ (Q.T @ v)
            nv = np.linalg.norm(v)
            if nv <= 1e-10 * max(col_norms[best], 1.0):
                warnings.append(
                    "column %d dropped: collinear with selected span" % best)
                blocked[best] = True
                cand[best] = -1.0
                continue
            Q = np.hstack([Q, (v / nv)[:, None]])
            j = best
            break
        if j < 0:
            break
        support.append(j)
        scores.append(float(cand[j]) * sum_w)
        blocked[j] = True
        R = Mc - Q @ (Q.T @ Mc)
        norms_trace.append(np.sqrt(np.einsum("ij,ij->j", R, R)))

    if support:
        Xs = Xc[:, support]
        cs = np.linalg.lstsq(Xs, Mc, rcond=None)[0]
    else:
        cs = np.zeros((0, L))
    C = np.zeros((d, L))
    if support:
        C[support, :] = cs
    biases = m_mean - x_mean[support] @ cs if support else m_mean.copy()
    coef = Coefficients(weights=C, biases=biases)
    return GreedyFit(support, coef, np.vstack(norms_trace),
                     np.asarray(scores), warnings)


def omp(X, y, cfg: GreedyConfig) -> GreedyFit:
    """Orthogonal matching pursuit for a single target vector.

    Selects the column maximizing |x_j . r| (unit-normalized by
    default), refits by least squares over the selected columns, and
    repeats until K features are chosen or the residual norm drops to
    residual_tol.
    """
    X = check_data_matrix(X)
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (X.shape[0],):
        raise ValueError("y must be a vector with one entry per row of X")
    if not np.all(np.isfinite(y)):
        raise ValueError("y must be finite")
    return _pursuit(X, y[:, None], np.ones(1), cfg)


def somp(X, Y, cfg: GreedyConfig) -> GreedyFit:
    """Simultaneous OMP: one shared support across all task columns.

    The selection score of column j is sum_l w_l |x_j . r_l| with
    w_l = 1/N_l for indicator responses and 1 otherwise (the stored
    scores keep that raw scale; selection itself uses the weights
    normalized to sum one, which leaves the argmax unchanged).  Each
    task is refit by least squares over the shared support after every
    selection; stops at K features or when max_l ||r_l|| <= residual_tol.
    """
    X = check_data_matrix(X)
    M = getattr(Y, "matrix", Y)
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != X.shape[0]:
        raise ValueError("Y must form an N x L matrix matching X")
    if not np.all(np.isfinite(M)):
        raise ValueError("Y must be finite")
    counts = getattr(Y, "class_counts", None)
    if counts is not None:
        weights = 1.0 / np.asarray(counts, dtype=np.float64)
    else:
        weights = np.ones(M.shape[1])
    return _pursuit(X, M, weights, cfg)
