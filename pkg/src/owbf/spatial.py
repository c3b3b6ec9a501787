"""Spatial smoothing primitives: box mean and truncated separable Gaussian.

Both use whole-sample symmetric (mirror) boundary extension, the single
boundary rule shared by every filter in this package so the direct and
fast bilateral paths stay comparable.

The Gaussian is deliberately *unnormalized*: the center tap is exactly 1,
which is what the analytic derivative formulas of the fast path assume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import cv2
import numpy as np

from .image import ImageError, as_image

_MIRROR = cv2.BORDER_REFLECT_101  # whole-sample symmetric, edge pixel not repeated


def default_half_width(sigma_s: float) -> int:
    return int(math.ceil(3.0 * sigma_s))


@dataclass(frozen=True)
class SpatialKernel:
    """Truncated Gaussian window exp(-|j|^2 / 2 sigma_s^2), |j|_inf <= half_width."""

    sigma_s: float
    half_width: int = field(default=0)

    def __post_init__(self):
        if self.sigma_s <= 0:
            raise ImageError(f"sigma_s must be > 0, got {self.sigma_s}")
        if self.half_width == 0:
            object.__setattr__(self, "half_width", default_half_width(self.sigma_s))
        if self.half_width < 1:
            raise ImageError(f"half_width must be >= 1, got {self.half_width}")

    def taps(self) -> np.ndarray:
        t = np.arange(-self.half_width, self.half_width + 1, dtype=np.float64)
        return np.exp(-(t * t) / (2.0 * self.sigma_s**2))


def box_filter(f, L: int) -> np.ndarray:
    """Mean over the (2L+1)x(2L+1) window, mirror boundaries."""
    img = as_image(f)
    if L < 1:
        raise ImageError(f"box half-width must be >= 1, got {L}")
    size = 2 * L + 1
    if size > img.shape[0] or size > img.shape[1]:
        raise ImageError(
            f"box window {size} exceeds image dimensions {img.shape[1]}x{img.shape[0]}"
        )
    ones = np.ones(size, dtype=np.float64)
    return _separable(img, ones) / float(size * size)


def _separable(img: np.ndarray, taps: np.ndarray) -> np.ndarray:
    # row pass then column pass; the taps are symmetric, so correlation
    # and convolution coincide
    return cv2.sepFilter2D(
        np.ascontiguousarray(img, dtype=np.float64), -1, taps, taps, borderType=_MIRROR
    )


def gaussian_filter(f, kernel: SpatialKernel) -> np.ndarray:
    """Unnormalized truncated Gaussian convolution, separable, mirror boundaries.

    Accepts real or complex input; complex input is filtered as two
    independent real convolutions.
    """
    arr = np.asarray(f)
    W = kernel.half_width
    if min(arr.shape) <= W:
        # mirror extension needs the period; keep the rule simple and strict
        raise ImageError(
            f"kernel half_width {W} too large for image dimensions {arr.shape}"
        )
    taps = kernel.taps()
    if np.iscomplexobj(arr):
        return _separable(arr.real, taps) + 1j * _separable(arr.imag, taps)
    return _separable(as_image(arr), taps)
