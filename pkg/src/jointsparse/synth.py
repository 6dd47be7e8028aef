"""Synthetic benchmarks with planted row supports.

All draws come from the portable generator in rng.py in a fixed,
documented order, so identical specs give bit-identical datasets on any
platform.  The planted support has round(share_fraction*k) rows active
in every task; the remaining rows are private, dealt round-robin one
task each, so the union support always has exactly k rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Indicator, build_indicator
from .rng import PortableRng

__all__ = ["SynthSpec", "VerificationSplit", "synth_regression",
           "synth_classification"]


@dataclass(frozen=True)
class SynthSpec:
    """N samples, d features, L tasks, k planted support rows.

    snr is the per-task ratio of signal variance to noise variance
    (np.inf means noiseless regression); share_fraction in [0,1] sets
    how much of the support is common to all tasks.
    """

    N: int
    d: int
    L: int
    k: int
    snr: float
    share_fraction: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.N < 1 or self.d < 1 or self.L < 1 or self.k < 1:
            raise ValueError("N, d, L, k must all be positive")
        if self.k > self.d:
            raise ValueError("planted support size k exceeds d")
        if not self.snr > 0:
            raise ValueError("snr must be positive")
        if not 0.0 <= self.share_fraction <= 1.0:
            raise ValueError("share_fraction must lie in [0, 1]")


@dataclass
class VerificationSplit:
    train: tuple
    test: tuple
    per_class_train_count: int
    background_count: int


def _planted_rows(rng: PortableRng, spec: SynthSpec):
    """Support rows in draw order plus each row's active task list."""
    support = rng.choice(spec.d, spec.k)
    n_shared = int(round(spec.share_fraction * spec.k))
    active = []
    private_seen = 0
    for pos, row in enumerate(support):
        if pos < n_shared:
            active.append((row, list(range(spec.L))))
        else:
            active.append((row, [private_seen % spec.L]))
            private_seen += 1
    return support, active


def _planted_values(rng: PortableRng, active):
    """Uniform [1,2) magnitudes with random signs, in support order."""
    total = sum(len(tasks) for _, tasks in active)
    mags = 1.0 + rng.uniform(total)
    signs = rng.signs(total)
    return mags * signs


def synth_regression(spec: SynthSpec):
    """Gaussian X, planted sparse C, Y = XC + scaled Gaussian noise.

    Per-task noise variance is var(X c_l)/snr (zero when snr is
    infinite).  Returns (X, Y, planted C); draw order is X, support,
    planted values, noise.
    """
    rng = PortableRng(spec.seed)
    X = rng.normal(spec.N * spec.d).reshape(spec.N, spec.d)
    _, active = _planted_rows(rng, spec)
    values = _planted_values(rng, active)
    C = np.zeros((spec.d, spec.L))
    pos = 0
    for row, tasks in active:
        for l in tasks:
            C[row, l] = values[pos]
            pos += 1
    signal = X @ C
    if np.isinf(spec.snr):
        return X, signal, C
    noise = rng.normal(spec.N * spec.L).reshape(spec.N, spec.L)
    scale = np.sqrt(signal.var(axis=0) / spec.snr)
    return X, signal + noise * scale, C


def synth_classification(spec: SynthSpec, per_class: int, background: int,
                         test_per_class: int = 20) -> VerificationSplit:
    """Class-conditional Gaussians whose means differ only on the support.

    Class means carry the planted values scaled so that the mean square
    of the active mean entries equals snr against unit noise.  The train
    set stacks per_class samples for each of the L classes followed by
    background draws from the zero-mean distribution; the test set holds
    test_per_class fresh samples per class and no background.  spec.N is
    ignored (the counts fix the sizes).  Draw order is support, mean
    values, train class samples, background, test samples.
    """
    if per_class < 1:
        raise ValueError("per_class must be at least 1")
    if background < 0:
        raise ValueError("background must be non-negative")
    if test_per_class < 1:
        raise ValueError("test_per_class must be at least 1")
    if np.isinf(spec.snr):
        raise ValueError("snr must be finite for classification")

    rng = PortableRng(spec.seed)
    _, active = _planted_rows(rng, spec)
    values = _planted_values(rng, active)
    scale = np.sqrt(spec.snr / np.mean(values * values))
    MU = np.zeros((spec.d, spec.L))
    pos = 0
    for row, tasks in active:
        for l in tasks:
            MU[row, l] = values[pos] * scale
            pos += 1

    L, d = spec.L, spec.d
    train_cls = rng.normal(L * per_class * d).reshape(L, per_class, d)
    train_cls = train_cls + MU.T[:, None, :]
    X_parts = [train_cls.reshape(L * per_class, d)]
    labels = [l for l in range(L) for _ in range(per_class)]
    if background:
        X_parts.append(rng.normal(background * d).reshape(background, d))
        labels.extend([None] * background)
    X_train = np.vstack(X_parts)
    Y_train = build_indicator(labels, L)

    test_cls = rng.normal(L * test_per_class * d).reshape(L, test_per_class, d)
    test_cls = test_cls + MU.T[:, None, :]
    X_test = test_cls.reshape(L * test_per_class, d)
    test_labels = [l for l in range(L) for _ in range(test_per_class)]
    return VerificationSplit((X_train, Y_train), (X_test, test_labels),
                             per_class, background)
