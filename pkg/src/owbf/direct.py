"""Reference implementation of the guided bilateral family.

This is the semantic ground truth the fast path is measured against.  It is
written as plain per-pixel loops, optimized for transparency rather than
speed: cost is O((2W+1)^2) per pixel, so expect tens of seconds on a
512x512 image at sigma_s = 5.  Use the fast path for real work.

Summation per output pixel runs row-major over the window, which fixes the
floating-point result exactly regardless of how callers parallelize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .image import ImageError, as_image
from .spatial import box_filter, default_half_width


@dataclass(frozen=True)
class BilateralParams:
    """sigma_s in pixels, sigma_r in gray levels, window half-width W,
    box guide half-width L (robust variant only)."""

    sigma_s: float
    sigma_r: float
    half_width: int = field(default=0)
    box_half_width: int = 1

    def __post_init__(self):
        if self.sigma_s <= 0:
            raise ImageError(f"sigma_s must be > 0, got {self.sigma_s}")
        if self.sigma_r <= 0:
            raise ImageError(f"sigma_r must be > 0, got {self.sigma_r}")
        if self.half_width == 0:
            object.__setattr__(self, "half_width", default_half_width(self.sigma_s))
        if self.half_width < 1:
            raise ImageError(f"half_width must be >= 1, got {self.half_width}")
        if self.box_half_width < 1:
            raise ImageError(f"box half-width must be >= 1, got {self.box_half_width}")


def _spatial_weights(p: BilateralParams) -> list[list[float]]:
    W = p.half_width
    inv = 1.0 / (2.0 * p.sigma_s**2)
    return [
        [math.exp(-(dy * dy + dx * dx) * inv) for dx in range(-W, W + 1)]
        for dy in range(-W, W + 1)
    ]


def _mirror_pad_lists(img: np.ndarray, W: int) -> list[list[float]]:
    if min(img.shape) <= W:
        raise ImageError(f"half_width {W} too large for image dimensions {img.shape}")
    return np.pad(img, W, mode="reflect").tolist()


def guided_bilateral_direct(f, guide, p: BilateralParams) -> np.ndarray:
    """Bilateral average of f with the range kernel driven by `guide`.

    guide = f gives the standard filter, guide = box_filter(f, L) the robust
    one, guide = clean the oracle variant.
    """
    img = as_image(f)
    gimg = as_image(guide)
    if img.shape != gimg.shape:
        raise ImageError(f"image/guide dimensions differ: {img.shape} vs {gimg.shape}")
    W = p.half_width
    size = 2 * W + 1
    fp = _mirror_pad_lists(img, W)
    gp = _mirror_pad_lists(gimg, W)
    sw = _spatial_weights(p)
    inv_r = 1.0 / (2.0 * p.sigma_r**2)
    h, w = img.shape
    out = np.empty_like(img)
    exp = math.exp
    for y in range(h):
        frows = fp[y : y + size]
        grows = gp[y : y + size]
        orow = out[y]
        for x in range(w):
            g0 = gp[y + W][x + W]
            num = 0.0
            den = 0.0
            for dy in range(size):
                frow = frows[dy]
                grow = grows[dy]
                srow = sw[dy]
                for dx in range(size):
                    d = grow[x + dx] - g0
                    wt = srow[dx] * exp(-d * d * inv_r)
                    num += wt * frow[x + dx]
                    den += wt
            orow[x] = num / den
    return out


def sbf_direct(f, p: BilateralParams) -> np.ndarray:
    """Standard bilateral filter: the noisy image guides its own range kernel."""
    img = as_image(f)
    return guided_bilateral_direct(img, img, p)


def rbf_direct(f, p: BilateralParams) -> np.ndarray:
    """Robust bilateral filter: range kernel driven by a box-filtered guide."""
    img = as_image(f)
    return guided_bilateral_direct(img, box_filter(img, p.box_half_width), p)


def _center_output(fwin: np.ndarray, gwin: np.ndarray, p: BilateralParams) -> float:
    """Bilateral output at the center of a (2W+1)^2 window (no boundary logic)."""
    W = p.half_width
    sw = np.asarray(_spatial_weights(p))
    d = gwin - gwin[W, W]
    wt = sw * np.exp(-(d * d) / (2.0 * p.sigma_r**2))
    return float(np.sum(wt * fwin) / np.sum(wt))


def _localized_eval(kind: str, f: np.ndarray, p: BilateralParams, y: int, x: int) -> float:
    """Output pixel (y, x) of sbf/rbf recomputed from its dependency window only."""
    W, L = p.half_width, p.box_half_width
    if kind == "sbf":
        fp = np.pad(f, W, mode="reflect")
        win = fp[y : y + 2 * W + 1, x : x + 2 * W + 1]
        return _center_output(win, win, p)
    if kind == "rbf":
        R = W + L
        fp = np.pad(f, R, mode="reflect")
        big = fp[y : y + 2 * R + 1, x : x + 2 * R + 1]
        # box guide on the interior (2W+1)^2 region of the crop
        k = 2 * L + 1
        c = np.cumsum(np.cumsum(big, axis=0), axis=1)
        c = np.pad(c, ((1, 0), (1, 0)))
        sums = c[k:, k:] - c[:-k, k:] - c[k:, :-k] + c[:-k, :-k]
        guide = sums / float(k * k)
        win = big[L : L + 2 * W + 1, L : L + 2 * W + 1]
        return _center_output(win, guide, p)
    raise ImageError(f"unknown filter kind {kind!r}")


def fd_derivative(filter_fn, f, p: BilateralParams, pixels, h: float = 1e-3):
    """Central finite-difference self-derivatives d out(i) / d f(i).

    `filter_fn` is either a callable mapping an image to its filtered
    estimate, or one of the names "identity", "box", "sbf", "rbf" (the named
    direct filters recompute only the dependency window of each pixel).
    Returns one derivative per requested (row, col) pixel.
    """
    if h <= 0:
        raise ImageError(f"step h must be > 0, got {h}")
    img = as_image(f)
    named = {
        "identity": lambda a: a,
        "box": lambda a: box_filter(a, p.box_half_width),
    }
    results = []
    for (y, x) in pixels:
        if not (0 <= y < img.shape[0] and 0 <= x < img.shape[1]):
            raise ImageError(f"pixel ({y}, {x}) out of bounds for {img.shape}")
        lo = img.copy()
        hi = img.copy()
        lo[y, x] -= h
        hi[y, x] += h
        if callable(filter_fn):
            vhi = filter_fn(hi)[y, x]
            vlo = filter_fn(lo)[y, x]
        elif filter_fn in named:
            vhi = named[filter_fn](hi)[y, x]
            vlo = named[filter_fn](lo)[y, x]
        elif filter_fn in ("sbf", "rbf"):
            vhi = _localized_eval(filter_fn, hi, p, y, x)
            vlo = _localized_eval(filter_fn, lo, p, y, x)
        else:
            raise ImageError(f"unknown filter {filter_fn!r}")
        results.append((vhi - vlo) / (2.0 * h))
    return results
