"""Binary PGM (P5) reading/writing and a tiny loader registry.

PGM keeps image fixtures dependency-free and bit-exact.  Other formats
can be plugged in through register_loader without touching extraction.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["read_pgm", "write_pgm", "register_loader", "load_image"]


def _read_token(buf, pos):
    """Next whitespace-delimited token, skipping '#' comment lines."""
    n = len(buf)
    while pos < n:
        ch = buf[pos: pos + 1]
        if ch == b"#":
            while pos < n and buf[pos: pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif ch.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not buf[pos: pos + 1].isspace():
        pos += 1
    if start == pos:
        raise ValueError("truncated PGM header")
    return buf[start:pos], pos


def read_pgm(path) -> np.ndarray:
    """Read a binary PGM into float64 intensities in [0, 1].

    Only 8-bit files (maxval <= 255) are accepted.
    """
    with open(path, "rb") as fh:
        buf = fh.read()
    magic, pos = _read_token(buf, 0)
    if magic != b"P5":
        raise ValueError("not a binary PGM (P5) file: %r" % (magic,))
    width_tok, pos = _read_token(buf, pos)
    height_tok, pos = _read_token(buf, pos)
    maxval_tok, pos = _read_token(buf, pos)
    width, height, maxval = int(width_tok), int(height_tok), int(maxval_tok)
    if width < 1 or height < 1:
        raise ValueError("PGM dimensions must be positive")
    if not 0 < maxval <= 255:
        raise ValueError("only 8-bit PGM supported (maxval <= 255)")
    pos += 1  # single whitespace byte after maxval
    data = buf[pos: pos + width * height]
    if len(data) != width * height:
        raise ValueError("PGM pixel data truncated")
    pixels = np.frombuffer(data, dtype=np.uint8).reshape(height, width)
    return pixels.astype(np.float64) / maxval


def write_pgm(path, image, maxval: int = 255) -> None:
    """Write intensities in [0, 1] as a binary PGM."""
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError("image must be 2-D")
    if not 0 < maxval <= 255:
        raise ValueError("maxval must be in 1..255")
    quant = np.rint(np.clip(img, 0.0, 1.0) * maxval).astype(np.uint8)
    header = b"P5\n%d %d\n%d\n" % (img.shape[1], img.shape[0], maxval)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(quant.tobytes())


_LOADERS = {".pgm": read_pgm}


def register_loader(extension: str, loader) -> None:
    """Associate a file extension (".xyz") with a loader callable."""
    if not extension.startswith("."):
        raise ValueError("extension must start with a dot")
    _LOADERS[extension.lower()] = loader


def load_image(path) -> np.ndarray:
    ext = os.path.splitext(str(path))[1].lower()
    loader = _LOADERS.get(ext)
    if loader is None:
        raise ValueError("no loader registered for %r files" % ext)
    return loader(path)
