"""Core data model: multi-output linear predictors and sparsity measures.

Conventions used throughout the package:

* a data matrix is a dense (N, d) float64 array, one sample per row;
* responses for L tasks form an (N, L) matrix, for verification problems a
  0/1 indicator with at most a single 1 per row (all-zero rows are
  background samples belonging to none of the enrolled classes);
* a fitted model is a (d, L) weight matrix plus an L-vector of biases, and
  task l scores a sample x as x @ weights[:, l] + biases[l].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def check_data_matrix(X) -> np.ndarray:
    """Validate and return X as a dense (N, d) float64 array."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ValueError(f"data matrix must be 2-D and non-empty, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("data matrix contains non-finite entries")
    return X


@dataclass(frozen=True)
class Indicator:
    """0/1 response matrix for L one-vs-rest tasks.

    ``matrix`` is (N, L) with each row summing to 0 (background sample) or
    1; ``class_counts[l]`` is the number of positives of task l.
    """

    matrix: np.ndarray
    class_counts: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2:
            raise ValueError("indicator matrix must be 2-D")
        if not np.all((m == 0.0) | (m == 1.0)):
            raise ValueError("indicator matrix entries must be 0 or 1")
        if np.any(m.sum(axis=1) > 1):
            raise ValueError("each indicator row may contain at most a single 1")
        counts = m.sum(axis=0).astype(np.int64)
        if np.any(counts < 1):
            bad = int(np.argmin(counts))
            raise ValueError(f"class {bad} has zero positives")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "class_counts", counts)

    @property
    def n_samples(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_tasks(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class Coefficients:
    """Linear model for L tasks: (d, L) weights and per-task biases."""

    weights: np.ndarray
    biases: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        b = np.asarray(self.biases, dtype=np.float64)
        if w.ndim != 2:
            raise ValueError("weights must be 2-D (features x tasks)")
        if b.ndim != 1 or b.shape[0] != w.shape[1]:
            raise ValueError(
                f"biases must be a length-{w.shape[1]} vector, got shape {b.shape}"
            )
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
            raise ValueError("coefficients contain non-finite entries")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "biases", b)

    @property
    def n_features(self) -> int:
        return self.weights.shape[0]

    @property
    def n_tasks(self) -> int:
        return self.weights.shape[1]


def build_indicator(labels, n_classes: int) -> Indicator:
    """Build the 0/1 response matrix from per-sample class ids.

    ``labels`` holds one entry per sample: an integer class id in
    [0, n_classes) or None for background samples, which get all-zero rows.
    Every class must have at least one positive sample.
    """
    labels = list(labels)
    if n_classes < 1:
        raise ValueError("n_classes must be >= 1")
    m = np.zeros((len(labels), n_classes))
    for i, lab in enumerate(labels):
        if lab is None:
            continue
        lab = int(lab)
        if not 0 <= lab < n_classes:
            raise ValueError(f"label {lab} at row {i} outside [0, {n_classes})")
        m[i, lab] = 1.0
    return Indicator(m)


def _weights(C) -> np.ndarray:
    w = C.weights if isinstance(C, Coefficients) else np.asarray(C, dtype=np.float64)
    if w.ndim == 1:
        w = w[:, None]
    return w


def predict(X, C: Coefficients) -> np.ndarray:
    """Score matrix: scores[i, l] = x_i @ weights[:, l] + biases[l]."""
    X = check_data_matrix(X)
    if X.shape[1] != C.n_features:
        raise ValueError(
            f"feature dimension mismatch: X has {X.shape[1]}, model has {C.n_features}"
        )
    return X @ C.weights + C.biases[None, :]


def squared_error(X, y, c, b: float) -> float:
    """Residual sum of squares ||y - X c - b 1||_2^2 for a single task."""
    X = check_data_matrix(X)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    c = np.asarray(c, dtype=np.float64).reshape(-1)
    if y.shape[0] != X.shape[0]:
        raise ValueError(f"y has {y.shape[0]} entries, X has {X.shape[0]} rows")
    if c.shape[0] != X.shape[1]:
        raise ValueError(f"c has {c.shape[0]} entries, X has {X.shape[1]} columns")
    r = y - X @ c - float(b)
    return float(r @ r)


def multitask_loss(X, Y: Indicator, C: Coefficients) -> float:
    """Sum over tasks of the per-task squared error weighted by 1/N_l."""
    X = check_data_matrix(X)
    if Y.n_samples != X.shape[0]:
        raise ValueError("X and Y disagree on the number of samples")
    if Y.n_tasks != C.n_tasks:
        raise ValueError("Y and C disagree on the number of tasks")
    R = Y.matrix - predict(X, C)
    per_task = np.einsum("il,il->l", R, R)
    return float(np.sum(per_task / Y.class_counts))


def row_l0(C) -> int:
    """Number of rows with any exactly-nonzero entry (the row support size)."""
    w = _weights(C)
    return int(np.count_nonzero(np.any(w != 0.0, axis=1)))


def row_l0_eps(C, eps: float = 1e-10) -> int:
    """Row support size after zeroing entries of magnitude <= eps.

    Convex solvers leave tiny nonzeros; this is the practical counterpart
    of :func:`row_l0` for support extraction.
    """
    if eps < 0:
        raise ValueError("eps must be >= 0")
    w = _weights(C)
    return int(np.count_nonzero(np.max(np.abs(w), axis=1) > eps))


def support_rows(C, eps: float = 1e-10) -> np.ndarray:
    """Indices of rows whose max magnitude exceeds eps, ascending."""
    w = _weights(C)
    return np.flatnonzero(np.max(np.abs(w), axis=1) > eps)


def mixed_norm(C, p: float, q: float) -> float:
    """Row-wise l_q norms aggregated by sum of p-th powers.

    Valid for 0 < p <= 1 (sparsity-promoting outer exponent) and q > 1
    (density-promoting inner norm); q may be inf, in which case each row
    contributes the p-th power of its max magnitude.
    """
    if not 0 < p <= 1:
        raise ValueError(f"p must be in (0, 1], got {p}")
    if not q > 1:
        raise ValueError(f"q must be > 1, got {q}")
    w = np.abs(_weights(C))
    if np.isinf(q):
        row_norms = w.max(axis=1)
    else:
        row_norms = (w**q).sum(axis=1) ** (1.0 / q)
    return float(np.sum(row_norms**p))
