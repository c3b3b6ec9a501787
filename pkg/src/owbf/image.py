"""Grayscale image basics: validation, synthetic noise, and quality metrics.

Images are 2-D float64 numpy arrays in gray levels.  The nominal range is
[0, 255] but noisy and intermediate images are allowed to leave it; nothing
in this package clips except the 8-bit export in :mod:`owbf.pgmio`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PEAK = 255.0

# SplitMix64 constants (Steele, Lea, Flood 2014)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


class ImageError(ValueError):
    pass


def as_image(a) -> np.ndarray:
    """Validate and return a 2-D float64 image array."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ImageError(f"expected a non-empty 2-D image, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ImageError("image contains NaN or Inf samples")
    return arr


def _check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ImageError(f"image dimensions differ: {a.shape} vs {b.shape}")


@dataclass(frozen=True)
class NoiseSpec:
    """Additive white Gaussian noise: standard deviation (gray levels) and seed."""

    sigma: float
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ImageError(f"noise sigma must be >= 0, got {self.sigma}")
        if not 0 <= int(self.seed) < 2**64:
            raise ImageError("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class Metrics:
    mse: float
    psnr_db: float  # +inf when mse == 0


def _splitmix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 output function on an array of uint64 states."""
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _uniform_open(z: np.ndarray) -> np.ndarray:
    """Map uint64 words to doubles in (0, 1]."""
    return ((z >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53


def standard_normal_field(shape, seed: int) -> np.ndarray:
    """Deterministic N(0,1) field, indexed by pixel position.

    Pixel k (row-major) consumes words 2k and 2k+1 of the SplitMix64 stream
    for `seed`, combined with one Box-Muller transform.  The result depends
    only on (seed, shape), never on evaluation order.
    """
    n = int(np.prod(shape))
    counters = np.arange(1, 2 * n + 1, dtype=np.uint64) * _GAMMA + np.uint64(seed)
    words = _splitmix64(counters)
    u1 = _uniform_open(words[0::2])
    u2 = _uniform_open(words[1::2])
    z = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
    return z.reshape(shape)


def add_gaussian_noise(clean, spec: NoiseSpec) -> np.ndarray:
    """clean + sigma * w with w an i.i.d. standard normal field; not clipped."""
    img = as_image(clean)
    return img + spec.sigma * standard_normal_field(img.shape, spec.seed)


def mse(a, b) -> float:
    a = as_image(a)
    b = as_image(b)
    _check_same_shape(a, b)
    d = a - b
    return float(np.mean(d * d))


def psnr(a, b) -> Metrics:
    m = mse(a, b)
    if m == 0.0:
        return Metrics(mse=0.0, psnr_db=math.inf)
    return Metrics(mse=m, psnr_db=10.0 * math.log10(PEAK * PEAK / m))
