"""Verification metrics: ROC curves, AUC, TPR at fixed FPR, averaging.

Ties are grouped in the threshold sweep (all samples with an equal
score flip together), which makes the trapezoidal AUC coincide with the
Mann-Whitney pairwise statistic; auc_pairwise recomputes it from the
pair counts as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RocCurve",
    "AverageReport",
    "roc_curve",
    "auc_pairwise",
    "tpr_at_fpr",
    "person_curves",
    "average_protocol",
    "write_roc_csv",
    "write_summary_csv",
]


@dataclass(frozen=True)
class RocCurve:
    """Points (fpr, tpr) from (0,0) to (1,1) plus the trapezoidal area."""

    points: np.ndarray
    auc: float

    def __post_init__(self):
        p = self.points
        if p.ndim != 2 or p.shape[1] != 2 or p.shape[0] < 2:
            raise ValueError("points must be an m x 2 array with m >= 2")
        if not (p[0] == 0.0).all() or not (p[-1] == 1.0).all():
            raise ValueError("curve must start at (0,0) and end at (1,1)")
        if np.any(np.diff(p[:, 0]) < 0) or np.any(np.diff(p[:, 1]) < 0):
            raise ValueError("fpr and tpr must be non-decreasing")


def _check_binary(scores, labels):
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if s.ndim != 1 or y.shape != s.shape:
        raise ValueError("scores and labels must be equal-length vectors")
    if not np.all(np.isfinite(s)):
        raise ValueError("scores must be finite")
    pos = y.astype(bool)
    if pos.all() or not pos.any():
        raise ValueError("need at least one positive and one negative")
    return s, pos


def roc_curve(scores, labels) -> RocCurve:
    """Threshold sweep over unique scores, descending, ties grouped.

    labels are truthy for positives.  The returned AUC is the
    trapezoidal integral of the curve.
    """
    s, pos = _check_binary(scores, labels)
    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    pos_sorted = pos[order].astype(np.float64)
    # last index of each tie group
    last = np.nonzero(np.diff(s_sorted) != 0.0)[0]
    last = np.append(last, s_sorted.size - 1)
    tp = np.cumsum(pos_sorted)[last]
    fp = (last + 1.0) - tp
    P = pos.sum()
    Q = pos.size - P
    tpr = np.concatenate([[0.0], tp / P])
    fpr = np.concatenate([[0.0], fp / Q])
    auc = float(np.trapezoid(tpr, fpr))
    return RocCurve(np.column_stack([fpr, tpr]), auc)


def auc_pairwise(scores, labels) -> float:
    """(pos>neg pairs + half the tied pairs) / (P*Q)."""
    s, pos = _check_binary(scores, labels)
    ps = np.sort(s[pos])
    ns = np.sort(s[~pos])
    greater = np.searchsorted(ns, ps, side="left").sum()
    greater_or_equal = np.searchsorted(ns, ps, side="right").sum()
    ties = greater_or_equal - greater
    return (float(greater) + 0.5 * float(ties)) / (ps.size * ns.size)


def _upper_steps(points):
    """Collapse duplicate fpr values to their largest tpr."""
    fpr = points[:, 0]
    tpr = points[:, 1]
    keep = np.nonzero(np.diff(fpr) != 0.0)[0]
    keep = np.append(keep, fpr.size - 1)
    # tpr is non-decreasing, so the last point of each fpr run is its max
    return fpr[keep], tpr[keep]


def tpr_at_fpr(curve: RocCurve, fpr: float) -> float:
    """Linear interpolation, taking the upper value at vertical jumps."""
    if not 0.0 <= fpr <= 1.0:
        raise ValueError("fpr must lie in [0, 1]")
    xs, ys = _upper_steps(curve.points)
    return float(np.interp(fpr, xs, ys))


def person_curves(scores, labels) -> list:
    """One verification ROC per person from an M x L score matrix.

    Person l's positives are the samples labeled l; all other samples
    are negatives.
    """
    S = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if S.ndim != 2 or y.shape != (S.shape[0],):
        raise ValueError("scores must be M x L with one label per row")
    return [roc_curve(S[:, l], y == l) for l in range(S.shape[1])]


@dataclass
class AverageReport:
    """Cross-person averages; tpr01 fields are TPR at FPR 0.1."""

    fpr_grid: np.ndarray
    tpr_mean: np.ndarray
    tpr_std: np.ndarray
    auc_mean: float
    auc_std: float
    tpr01_mean: float
    tpr01_std: float


def _sample_std(values) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1))


def average_protocol(curves, fpr_grid=None) -> AverageReport:
    """Average per-person curves on a shared FPR grid.

    Each curve is interpolated onto the grid (default 0 to 1 in steps
    of 0.001) and averaged pointwise; AUC and TPR@0.1 statistics are the
    mean and sample standard deviation over the per-person values, not
    properties of the averaged curve.
    """
    curves = list(curves)
    if not curves:
        raise ValueError("need at least one curve")
    if fpr_grid is None:
        fpr_grid = np.linspace(0.0, 1.0, 1001)
    else:
        fpr_grid = np.asarray(fpr_grid, dtype=np.float64)
    interp = np.vstack([np.interp(fpr_grid, *_upper_steps(c.points))
                        for c in curves])
    aucs = np.array([c.auc for c in curves])
    tprs01 = np.array([tpr_at_fpr(c, 0.1) for c in curves])
    if len(curves) > 1:
        tpr_std = np.std(interp, axis=0, ddof=1)
    else:
        tpr_std = np.zeros_like(fpr_grid)
    return AverageReport(
        fpr_grid=fpr_grid,
        tpr_mean=interp.mean(axis=0),
        tpr_std=tpr_std,
        auc_mean=float(aucs.mean()),
        auc_std=_sample_std(aucs),
        tpr01_mean=float(tprs01.mean()),
        tpr01_std=_sample_std(tprs01),
    )


def write_roc_csv(path, report: AverageReport) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("fpr,tpr_mean,tpr_std\n")
        for f, m, s in zip(report.fpr_grid, report.tpr_mean, report.tpr_std):
            fh.write("%.17g,%.17g,%.17g\n" % (f, m, s))


def write_summary_csv(path, rows) -> None:
    """rows: iterable of (method, AverageReport)."""
    with open(path, "w", newline="") as fh:
        fh.write("method,tpr_at_0.1_mean,tpr_at_0.1_std,auc_mean,auc_std\n")
        for method, rep in rows:
            fh.write("%s,%.17g,%.17g,%.17g,%.17g\n"
                     % (method, rep.tpr01_mean, rep.tpr01_std,
                        rep.auc_mean, rep.auc_std))
