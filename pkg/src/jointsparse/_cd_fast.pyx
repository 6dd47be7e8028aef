# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled coordinate-descent sweep for the weighted l1 objective.

Mirrors the update order and thresholding of _cd_py.cd_sweep; the dot
product here accumulates sequentially, so iterates may differ from the
numpy fallback at the last-ulp level.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def cd_sweep(double[::1, :] X, double[::1] col_sq, double[::1] r,
             double[::1] c, double thresh):
    """One cyclic sweep; updates r and c in place, returns max |delta c_j|."""
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t i, j
    cdef double cj, rho, new, delta, max_delta
    max_delta = 0.0
    for j in range(d):
        if col_sq[j] <= 0.0:
            continue
        cj = c[j]
        if cj != 0.0:
            for i in range(n):
                r[i] += X[i, j] * cj
        rho = 0.0
        for i in range(n):
            rho += X[i, j] * r[i]
        if rho > thresh:
            new = (rho - thresh) / col_sq[j]
        elif rho < -thresh:
            new = (rho + thresh) / col_sq[j]
        else:
            new = 0.0
        if new != 0.0:
            for i in range(n):
                r[i] -= X[i, j] * new
        c[j] = new
        delta = new - cj
        if delta < 0.0:
            delta = -delta
        if delta > max_delta:
            max_delta = delta
    return max_delta
