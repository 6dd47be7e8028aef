"""Convex sparse solvers: l1 (LASSO), mixed-norm row sparsity, ridge refit.

The single-task objective is  ||y - X c - b||^2 + lam ||c||_1  with the
bias b unpenalized (handled by centering).  The multi-task objective sums
per-task losses weighted by 1/N_l and couples tasks through the l_{1,q}
row norm of the coefficient matrix, q in {2, inf}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import cd_sweep
from .model import Coefficients, check_data_matrix
from .prox import project_l1_ball, prox_l2_rows, prox_linf, prox_linf_rows

__all__ = [
    "ConvexConfig",
    "ConvexFit",
    "lasso",
    "lasso_lambda_max",
    "group_lambda_max",
    "solve_all_single_task",
    "group_solver",
    "ridge_refit",
    "lasso_kkt_violation",
    "prox_linf",
    "project_l1_ball",
]


@dataclass(frozen=True)
class ConvexConfig:
    """Settings shared by the convex solvers.

    lam is the sparsity weight (lambda in the objectives above); q picks
    the within-row norm for the multi-task program and is ignored by the
    pure l1 paths.  step_rule applies to the proximal-gradient solver
    only: "backtracking" doubles a local Lipschitz estimate until the
    quadratic upper bound holds, "fixed" uses 2*sigma_max(X)^2*max_l(1/N_l)
    estimated by 50 power iterations.
    """

    lam: float
    max_iters: int = 10000
    rel_tol: float = 1e-8
    step_rule: str = "backtracking"
    q: float = np.inf

    def __post_init__(self):
        if not np.isfinite(self.lam) or self.lam <= 0:
            raise ValueError("lam must be a positive finite number")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.step_rule not in ("backtracking", "fixed"):
            raise ValueError("step_rule must be 'backtracking' or 'fixed'")
        if not (self.q == 2 or np.isinf(self.q)):
            raise ValueError("q must be 2 or inf")


@dataclass
class ConvexFit:
    coefficients: Coefficients
    objective_trace: np.ndarray
    converged: bool
    iterations_used: int


def _center(X, y):
    x_mean = X.mean(axis=0)
    y_mean = y.mean(axis=0)
    return X - x_mean, y - y_mean, x_mean, y_mean


def _task_matrix(Y):
    """Accept an Indicator or a plain 2-D float array of task targets."""
    M = getattr(Y, "matrix", Y)
    M = np.asarray(M, dtype=np.float64)
    if M.ndim == 1:
        M = M[:, None]
    if M.ndim != 2:
        raise ValueError("task responses must form an N x L matrix")
    if not np.all(np.isfinite(M)):
        raise ValueError("task responses must be finite")
    return M


def _task_weights(Y, M):
    """1/N_l for indicator responses, unit weights for plain matrices."""
    counts = getattr(Y, "class_counts", None)
    if counts is not None:
        return 1.0 / np.asarray(counts, dtype=np.float64)
    return np.ones(M.shape[1])


def lasso_lambda_max(X, y, weight: float = 1.0) -> float:
    """Smallest lam for which the solution is exactly zero.

    From stationarity at c = 0: |2 w x_j . y| <= lam for all centered
    columns x_j and centered y.
    """
    Xc, yc, _, _ = _center(np.asarray(X, dtype=np.float64),
                           np.asarray(y, dtype=np.float64))
    return 2.0 * weight * float(np.max(np.abs(Xc.T @ yc), initial=0.0))


def lasso_kkt_violation(X, y, c, lam: float, weight: float = 1.0) -> float:
    """Worst stationarity violation, scaled so <= 1e-6 means optimal.

    Active coordinates must satisfy |2 w x_j.r - lam sign(c_j)| <= tol*lam
    and inactive ones |2 w x_j.r| <= lam (1 + tol); the return value is
    the max over coordinates of the violation divided by lam.
    """
    Xc, yc, _, _ = _center(np.asarray(X, dtype=np.float64),
                           np.asarray(y, dtype=np.float64))
    r = yc - Xc @ c
    g = 2.0 * weight * (Xc.T @ r)
    active = c != 0.0
    viol = np.abs(g) - lam
    viol[active] = np.abs(g[active] - lam * np.sign(c[active]))
    return float(np.max(viol, initial=0.0)) / lam


def _weighted_lasso(Xc, yc, cfg: ConvexConfig, weight: float):
    """Cyclic coordinate descent on centered data.

    Iterates until the relative objective change drops below rel_tol and
    the stationarity certificate holds (checked only once the objective
    has settled, since it costs a full matrix-vector product).
    """
    n, d = Xc.shape
    X_f = np.asfortranarray(Xc)
    col_sq = np.einsum("ij,ij->j", Xc, Xc)
    thresh = cfg.lam / (2.0 * weight)
    c = np.zeros(d)
    r = yc.copy()

    def objective():
        return weight * float(r @ r) + cfg.lam * float(np.abs(c).sum())

    trace = [objective()]
    converged = False
    it = 0
    for it in range(1, cfg.max_iters + 1):
        cd_sweep(X_f, col_sq, r, c, thresh)
        obj = objective()
        trace.append(obj)
        prev = trace[-2]
        if abs(prev - obj) <= cfg.rel_tol * max(1.0, abs(prev)):
            # the incrementally maintained residual drifts over many
            # sweeps, so certify optimality against a fresh one
            r[:] = yc - Xc @ c
            g = 2.0 * weight * (Xc.T @ r)
            viol = np.abs(g) - cfg.lam
            active = c != 0.0
            viol[active] = np.abs(g[active] - cfg.lam * np.sign(c[active]))
            if np.max(viol, initial=0.0) <= 1e-6 * cfg.lam:
                converged = True
                break
    return c, np.asarray(trace), converged, it


def lasso(X, y, cfg: ConvexConfig, weight: float = 1.0) -> ConvexFit:
    """Minimize  weight*||y - X c - b||^2 + lam ||c||_1.

    The bias is recovered from the column and response means after
    solving on centered data.  Non-convergence within max_iters is
    reported through the converged flag, not raised.
    """
    X = check_data_matrix(X)
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (X.shape[0],):
        raise ValueError("y must be a vector with one entry per row of X")
    if not np.all(np.isfinite(y)):
        raise ValueError("y must be finite")
    if weight <= 0:
        raise ValueError("weight must be positive")
    Xc, yc, x_mean, y_mean = _center(X, y)
    c, trace, converged, it = _weighted_lasso(Xc, yc, cfg, weight)
    b = y_mean - x_mean @ c
    coef = Coefficients(weights=c[:, None], biases=np.array([b]))
    return ConvexFit(coef, trace, converged, it)


def solve_all_single_task(X, Y, cfg: ConvexConfig) -> ConvexFit:
    """Solve L independent weighted LASSO problems, one per task.

    Task l carries loss weight 1/N_l (N_l the number of positives in the
    indicator column; unit weight when Y is a plain matrix) and shares
    lam, so the summed objective decouples into per-column problems.  The
    returned trace is the sum of per-task traces, shorter ones padded
    with their final value.
    """
    X = check_data_matrix(X)
    M = _task_matrix(Y)
    if M.shape[0] != X.shape[0]:
        raise ValueError("X and Y row counts differ")
    weights = _task_weights(Y, M)
    d, L = X.shape[1], M.shape[1]

    Xc, Mc, x_mean, m_mean = _center(X, M)
    C = np.zeros((d, L))
    traces = []
    converged = True
    iterations = 0
    for l in range(L):
        c, trace, ok, it = _weighted_lasso(Xc, Mc[:, l], cfg, weights[l])
        C[:, l] = c
        traces.append(trace)
        converged = converged and ok
        iterations = max(iterations, it)
    n_steps = max(len(t) for t in traces)
    total = np.zeros(n_steps)
    for t in traces:
        total[: len(t)] += t
        total[len(t):] += t[-1]
    biases = m_mean - x_mean @ C
    coef = Coefficients(weights=C, biases=biases)
    return ConvexFit(coef, total, converged, iterations)


def group_lambda_max(X, Y, q: float = np.inf) -> float:
    """Smallest lam for which the mixed-norm solution is exactly zero.

    The gradient of the weighted loss at C = 0 has rows g_i; zero is
    optimal iff the dual row norm of every g_i is at most lam (l1 for
    q = inf, l2 for q = 2).
    """
    X = check_data_matrix(X)
    M = _task_matrix(Y)
    weights = _task_weights(Y, M)
    Xc, Mc, _, _ = _center(X, M)
    G = -2.0 * (Xc.T @ Mc) * weights
    if np.isinf(q):
        row_dual = np.abs(G).sum(axis=1)
    else:
        row_dual = np.sqrt(np.einsum("ij,ij->i", G, G))
    return float(np.max(row_dual, initial=0.0))


def _power_sigma_sq(Xc, iters: int = 50) -> float:
    """Largest squared singular value of Xc by power iteration."""
    d = Xc.shape[1]
    v = np.full(d, 1.0 / np.sqrt(d))
    for _ in range(iters):
        w = Xc.T @ (Xc @ v)
        nrm = np.linalg.norm(w)
        if nrm == 0.0:
            return 0.0
        v = w / nrm
    return float(np.linalg.norm(Xc @ v) ** 2)


def group_solver(X, Y, cfg: ConvexConfig) -> ConvexFit:
    """Minimize  sum_l w_l ||y_l - X c_l - b_l||^2 + lam ||C||_{1,q}.

    w_l is 1/N_l for indicator responses and 1 for plain matrices.
    Accelerated proximal gradient with a monotone safeguard: the
    extrapolated candidate is kept only if it does not increase the
    objective, otherwise the previous iterate is retained and the
    momentum is restarted.  This keeps the stored objective trace
    non-increasing for either step rule.
    """
    X = check_data_matrix(X)
    M = _task_matrix(Y)
    if M.shape[0] != X.shape[0]:
        raise ValueError("X and Y row counts differ")
    w = _task_weights(Y, M)
    d, L = X.shape[1], M.shape[1]

    Xc, Mc, x_mean, m_mean = _center(X, M)
    XtM = Xc.T @ Mc

    def smooth(C):
        R = Mc - Xc @ C
        return float(np.einsum("ij,ij->j", R, R) @ w)

    def grad(C):
        return 2.0 * ((Xc.T @ (Xc @ C)) - XtM) * w

    if np.isinf(cfg.q):
        prox_rows = prox_linf_rows

        def row_norms(C):
            return np.abs(C).max(axis=1)
    else:
        prox_rows = prox_l2_rows

        def row_norms(C):
            return np.sqrt(np.einsum("ij,ij->i", C, C))

    def objective(C):
        return smooth(C) + cfg.lam * float(row_norms(C).sum())

    if cfg.step_rule == "fixed":
        L_step = 2.0 * _power_sigma_sq(Xc) * float(w.max())
        if L_step <= 0.0:
            L_step = 1.0
    else:
        L_step = max(2.0 * float(np.einsum("ij,ij->j", Xc, Xc).mean())
                     * float(w.max()), 1e-12)

    C_prev = np.zeros((d, L))
    C_cur = C_prev
    V = C_prev
    t_cur = 1.0
    f_cur = objective(C_cur)
    trace = [f_cur]
    converged = False
    it = 0
    for it in range(1, cfg.max_iters + 1):
        g_v = grad(V)
        s_v = smooth(V)
        while True:
            U = prox_rows(V - g_v / L_step, cfg.lam / L_step)
            if cfg.step_rule == "fixed":
                break
            D = U - V
            bound = s_v + float(np.sum(g_v * D)) \
                + 0.5 * L_step * float(np.sum(D * D))
            if smooth(U) <= bound + 1e-12 * max(1.0, abs(bound)):
                break
            L_step *= 2.0
        f_u = objective(U)
        accepted = f_u <= f_cur
        C_prev = C_cur
        f_prev = f_cur
        if accepted:
            C_cur = U
            f_cur = f_u
            t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t_cur * t_cur))
            V = C_cur + (t_cur / t_next) * (U - C_cur) \
                + ((t_cur - 1.0) / t_next) * (C_cur - C_prev)
            t_cur = t_next
        else:
            t_cur = 1.0
            V = C_cur
        trace.append(f_cur)
        if accepted and abs(f_prev - f_cur) <= cfg.rel_tol * max(1.0, abs(f_prev)):
            converged = True
            break
    biases = m_mean - x_mean @ C_cur
    coef = Coefficients(weights=C_cur, biases=biases)
    return ConvexFit(coef, np.asarray(trace), converged, it)


def ridge_refit(X, Y, support, alpha: float = 1.0) -> Coefficients:
    """Re-estimate coefficients on a fixed support with an l2 penalty.

    Solves (X_S^T X_S + alpha I) c_S = X_S^T y_l per task on centered
    data; rows outside the support are zero.  The support is treated as
    a set, so its order does not affect the result.
    """
    X = check_data_matrix(X)
    M = _task_matrix(Y)
    if M.shape[0] != X.shape[0]:
        raise ValueError("X and Y row counts differ")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    idx = sorted(set(int(j) for j in support))
    if not idx:
        raise ValueError("support must be non-empty")
    d = X.shape[1]
    if idx[0] < 0 or idx[-1] >= d:
        raise ValueError("support index out of range")

    Xs = X[:, idx]
    Xc, Mc, x_mean, m_mean = _center(Xs, M)
    G = Xc.T @ Xc + alpha * np.eye(len(idx))
    Cs = np.linalg.solve(G, Xc.T @ Mc)
    C = np.zeros((d, M.shape[1]))
    C[idx, :] = Cs
    biases = m_mean - x_mean @ Cs
    return Coefficients(weights=C, biases=biases)
