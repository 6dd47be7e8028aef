"""Pure-numpy fallback for the coordinate-descent sweep kernel.

Same update order and thresholding logic as the compiled version in
_cd_fast.pyx (summation order differs, so iterates can drift at the
last-ulp level); used when the extension is unavailable or
JOINTSPARSE_PURE_PYTHON is set.
"""

from __future__ import annotations

import numpy as np


def cd_sweep(X, col_sq, r, c, thresh: float) -> float:
    """One full cyclic coordinate-descent sweep for the l1 objective.

    Minimizes w ||y - X c||^2 + lam ||c||_1 one coordinate at a time, with
    thresh = lam / (2 w). X must be column-accessible (Fortran order
    preferred); r (the residual y - X c) and c are updated in place.
    Columns with zero squared norm are skipped. Returns max |delta c_j|.
    """
    d = X.shape[1]
    max_delta = 0.0
    for j in range(d):
        if col_sq[j] <= 0.0:
            continue
        xj = X[:, j]
        cj = c[j]
        if cj != 0.0:
            r += xj * cj
        rho = float(xj @ r)
        if rho > thresh:
            new = (rho - thresh) / col_sq[j]
        elif rho < -thresh:
            new = (rho + thresh) / col_sq[j]
        else:
            new = 0.0
        if new != 0.0:
            r -= xj * new
        c[j] = new
        delta = abs(new - cj)
        if delta > max_delta:
            max_delta = delta
    return max_delta
