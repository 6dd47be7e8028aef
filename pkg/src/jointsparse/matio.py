"""Matrix and label persistence.

Binary matrices use a small fixed layout: the magic bytes "SSA1", then
three little-endian unsigned 32-bit fields (row count, column count, a
reserved zero word that pads the header to 16 bytes), then the values
row-major as little-endian IEEE-754 doubles, so a saved N x d matrix
occupies exactly 16 + 8*N*d bytes.  Paths ending in ".csv" use
comma-separated text with %.17g formatting instead, which round-trips
float64 exactly.  Labels files are two headerless CSV columns:
sample_index, class_id (with "-" marking background samples).
"""

from __future__ import annotations

import struct

import numpy as np

__all__ = ["save_matrix", "load_matrix", "save_labels", "load_labels"]

_MAGIC = b"SSA1"
_U32_MAX = 2 ** 32 - 1


def _is_csv(path) -> bool:
    return str(path).lower().endswith(".csv")


def save_matrix(path, matrix) -> None:
    M = np.asarray(matrix, dtype=np.float64)
    if M.ndim != 2:
        raise ValueError("matrix must be 2-D")
    rows, cols = M.shape
    if rows > _U32_MAX or cols > _U32_MAX:
        raise ValueError("matrix dimensions overflow the 32-bit header")
    if _is_csv(path):
        with open(path, "w", newline="") as fh:
            for i in range(rows):
                fh.write(",".join("%.17g" % v for v in M[i]))
                fh.write("\n")
        return
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<III", rows, cols, 0))
        fh.write(M.astype("<f8", copy=False).tobytes(order="C"))


def load_matrix(path) -> np.ndarray:
    if _is_csv(path):
        with open(path, "r") as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip()]
        if not lines:
            raise ValueError("malformed matrix file: empty")
        data = [[float(tok) for tok in ln.split(",")] for ln in lines]
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise ValueError("malformed matrix file: ragged rows")
        return np.asarray(data, dtype=np.float64)
    with open(path, "rb") as fh:
        buf = fh.read()
    if len(buf) < 16:
        raise ValueError("malformed matrix file: truncated header")
    if buf[:4] != _MAGIC:
        raise ValueError("malformed matrix file: bad magic")
    rows, cols, reserved = struct.unpack("<III", buf[4:16])
    if reserved != 0:
        raise ValueError("malformed matrix file: nonzero reserved field")
    expected = 16 + 8 * rows * cols
    if len(buf) != expected:
        raise ValueError("malformed matrix file: size mismatch")
    values = np.frombuffer(buf, dtype="<f8", offset=16, count=rows * cols)
    return values.reshape(rows, cols).astype(np.float64)


def save_labels(path, labels) -> None:
    """Write one 'index,class_id' line per sample; background is '-'."""
    with open(path, "w", newline="") as fh:
        for i, lab in enumerate(labels):
            fh.write("%d,%s\n" % (i, "-" if lab is None else int(lab)))


def load_labels(path) -> list:
    """Read labels back as a list of ints with None for background."""
    labels = []
    with open(path, "r") as fh:
        for n, line in enumerate(fh.read().splitlines()):
            if not line.strip():
                continue
            idx_tok, lab_tok = line.split(",")
            if int(idx_tok) != n:
                raise ValueError("labels file indices must be 0..N-1 in order")
            labels.append(None if lab_tok == "-" else int(lab_tok))
    return labels
