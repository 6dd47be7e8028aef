"""Gabor filter bank, face alignment, and magnitude feature extraction.

The bank follows the usual face-recognition parameterization: complex
kernels with a Gaussian envelope, wave number k_max/spacing^s at scale s,
orientations o*pi/orientations, and discrete DC removal (the real and
imaginary parts are shifted to exact zero mean over the window).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FilterBank",
    "AlignedFace",
    "build_filter_bank",
    "align_and_crop",
    "extract",
]

DEFAULT_EYE_TARGETS = ((0.3, 0.35), (0.7, 0.35))


@dataclass(frozen=True)
class FilterBank:
    kernels: tuple
    scales: int
    orientations: int
    kernel_size: int

    def __post_init__(self):
        if len(self.kernels) != self.scales * self.orientations:
            raise ValueError("kernel count must equal scales * orientations")


@dataclass(frozen=True)
class AlignedFace:
    """Square grayscale crop with intensities in [0, 1]."""

    pixels: np.ndarray

    def __post_init__(self):
        p = self.pixels
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError("aligned face must be a square 2-D array")
        if not np.all(np.isfinite(p)):
            raise ValueError("aligned face must be finite")
        if p.min() < -1e-9 or p.max() > 1.0 + 1e-9:
            raise ValueError("aligned face intensities must lie in [0, 1]")


def build_filter_bank(scales: int = 5, orientations: int = 8,
                      k_max: float = np.pi / 2.0,
                      spacing: float = np.sqrt(2.0),
                      sigma: float = 2.0 * np.pi,
                      kernel_size: int = 33) -> FilterBank:
    """Build scales*orientations complex Gabor kernels.

    Kernel (s, o) is (k^2/sigma^2) exp(-k^2 |z|^2 / (2 sigma^2))
    exp(i k . z) on a kernel_size window, k = k_max/spacing^s in
    direction o*pi/orientations, followed by subtraction of the window
    mean from the real and imaginary parts.  Kernels are ordered
    scale-major: index s*orientations + o.
    """
    if scales < 1 or orientations < 1:
        raise ValueError("scales and orientations must be at least 1")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if k_max <= 0 or spacing <= 0:
        raise ValueError("k_max and spacing must be positive")
    if kernel_size < 1 or kernel_size % 2 == 0:
        raise ValueError("kernel_size must be a positive odd number")

    half = kernel_size // 2
    coords = np.arange(-half, half + 1, dtype=np.float64)
    dx, dy = np.meshgrid(coords, coords)
    r_sq = dx * dx + dy * dy

    kernels = []
    for s in range(scales):
        k_s = k_max / spacing ** s
        envelope = (k_s * k_s / (sigma * sigma)) \
            * np.exp(-k_s * k_s * r_sq / (2.0 * sigma * sigma))
        for o in range(orientations):
            theta = o * np.pi / orientations
            phase = k_s * (np.cos(theta) * dx + np.sin(theta) * dy)
            ker = envelope * np.exp(1j * phase)
            ker = ker - (ker.real.mean() + 1j * ker.imag.mean())
            kernels.append(ker)
    return FilterBank(tuple(kernels), scales, orientations, kernel_size)


def _bilinear(img, xs, ys):
    """Sample img at continuous points; pixel (i, j) is centered at
    (x, y) = (j + 0.5, i + 0.5).  Out-of-range points clamp to the edge.
    """
    h, w = img.shape
    fx = np.clip(xs - 0.5, 0.0, w - 1.0)
    fy = np.clip(ys - 0.5, 0.0, h - 1.0)
    x0 = np.floor(fx).astype(np.intp)
    y0 = np.floor(fy).astype(np.intp)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    tx = fx - x0
    ty = fy - y0
    top = img[y0, x0] * (1.0 - tx) + img[y0, x1] * tx
    bot = img[y1, x0] * (1.0 - tx) + img[y1, x1] * tx
    return top * (1.0 - ty) + bot * ty


def align_and_crop(image, eye_left, eye_right, crop: int = 64,
                   targets=DEFAULT_EYE_TARGETS) -> AlignedFace:
    """Rotate/scale/translate so the eye centers land on fixed points.

    Coordinates are (x, y) with x along columns, y along rows, in the
    half-pixel-center convention above.  The eyes are mapped to
    targets[0]*crop and targets[1]*crop (defaults (0.3, 0.35) and
    (0.7, 0.35)) by the unique orientation-preserving similarity
    transform; the output is bilinearly resampled and min-max rescaled
    to [0, 1] (a constant crop maps to zeros).
    """
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError("image must be a 2-D grayscale array")
    if crop < 1:
        raise ValueError("crop must be positive")
    h, w = img.shape
    el = complex(eye_left[0], eye_left[1])
    er = complex(eye_right[0], eye_right[1])
    if el == er:
        raise ValueError("eye centers must be distinct")
    for z, name in ((el, "eye_left"), (er, "eye_right")):
        if not (0.0 <= z.real <= w and 0.0 <= z.imag <= h):
            raise ValueError("%s lies outside the image" % name)

    tl = complex(targets[0][0] * crop, targets[0][1] * crop)
    tr = complex(targets[1][0] * crop, targets[1][1] * crop)
    a = (tr - tl) / (er - el)
    b = tl - a * el

    cols = np.arange(crop) + 0.5
    rows = np.arange(crop) + 0.5
    u, v = np.meshgrid(cols, rows)
    src = ((u + 1j * v) - b) / a
    out = _bilinear(img, src.real, src.imag)

    lo, hi = out.min(), out.max()
    if hi > lo:
        out = (out - lo) / (hi - lo)
    else:
        out = np.zeros_like(out)
    return AlignedFace(out)


def _convolve_same_reflect(img, kernel):
    """True 2-D convolution, same-size output, reflective border.

    The image is reflect-padded by the kernel half-width, linearly
    convolved via FFT, and the centered window sliced out.
    """
    kh, kw = kernel.shape
    ph, pw = kh // 2, kw // 2
    padded = np.pad(img, ((ph, ph), (pw, pw)), mode="reflect")
    sh = padded.shape[0] + kh - 1
    sw = padded.shape[1] + kw - 1
    full = np.fft.ifft2(np.fft.fft2(padded, (sh, sw))
                        * np.fft.fft2(kernel, (sh, sw)))
    return full[kh - 1: kh - 1 + img.shape[0],
                kw - 1: kw - 1 + img.shape[1]]


def extract(face, bank: FilterBank) -> np.ndarray:
    """Magnitude responses of every kernel, concatenated to one vector.

    Output order is scale-major, then orientation, then row-major
    pixels, so the length is H*W*scales*orientations.
    """
    img = np.asarray(getattr(face, "pixels", face), dtype=np.float64)
    if img.ndim != 2:
        raise ValueError("face must be a 2-D grayscale array")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError("face must be non-empty")
    parts = [np.abs(_convolve_same_reflect(img, ker)).ravel()
             for ker in bank.kernels]
    return np.concatenate(parts)
