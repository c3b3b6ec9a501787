"""Raised-cosine expansion of the Gaussian range kernel.

exp(-t^2 / 2 sigma_r^2) is approximated on [-T, T] by cos(t nu)^N with
nu = 1/(sigma_r sqrt(N)), which expands into N+1 complex exponentials with
binomial weights.  That turns the bilateral filter into a fixed series of
Gaussian convolutions of modulated images.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from .image import ImageError

MIN_ORDER = 4
MAX_ORDER = 4096

# The argument-range (monotone lobe) bound alone leaves a sup-norm kernel
# error of about 0.18/N, too coarse near its own threshold.  Automatic order
# selection therefore scales the bound up and floors it so the sup error
# stays a few 1e-3 even when the lobe bound would allow a tiny order.
ACCURACY_FACTOR = 1.35
MIN_AUTO_ORDER = 160

# Terms whose binomial weight falls below this threshold are skipped by the
# fast filters.  The skipped mass is below (N+1) * threshold ~ 4e-10, i.e.
# well under every tolerance in the test suite (see docs in fast.py).
NEGLIGIBLE_COEFF = 1e-13


class KernelOrderError(ImageError):
    pass


@dataclass(frozen=True)
class ShiftableKernel:
    """Order-N expansion: weights c (binomial), frequencies omega (rad per
    gray level), valid for range arguments |t| <= T."""

    N: int
    c: np.ndarray
    omega: np.ndarray
    T: float
    sigma_r: float

    def gauss_values(self, t) -> np.ndarray:
        """Target range kernel exp(-t^2 / 2 sigma_r^2)."""
        t = np.asarray(t, dtype=np.float64)
        return np.exp(-(t * t) / (2.0 * self.sigma_r**2))

    def cos_values(self, t) -> np.ndarray:
        """The raised-cosine approximation cos(t nu)^N."""
        t = np.asarray(t, dtype=np.float64)
        return np.cos(t / (self.sigma_r * math.sqrt(self.N))) ** self.N


def lobe_bound(sigma_r: float, T: float) -> float:
    """Order below which |t| nu leaves the monotone cosine lobe on [-T, T]."""
    return (2.0 * T / (math.pi * sigma_r)) ** 2


def required_order(sigma_r: float, T: float) -> int:
    return max(MIN_AUTO_ORDER, int(math.ceil(ACCURACY_FACTOR * lobe_bound(sigma_r, T))))


def build_kernel(sigma_r: float, T: float, N_override: int | None = None) -> ShiftableKernel:
    if sigma_r <= 0:
        raise ImageError(f"sigma_r must be > 0, got {sigma_r}")
    if T <= 0:
        raise ImageError(f"dynamic range T must be > 0, got {T}")
    if N_override is None:
        N = required_order(sigma_r, T)
        if N > MAX_ORDER:
            raise KernelOrderError(
                f"required order {N} exceeds cap {MAX_ORDER}: sigma_r={sigma_r} "
                f"is too small for dynamic range T={T}"
            )
    else:
        N = int(N_override)
        if not 1 <= N <= MAX_ORDER:
            raise KernelOrderError(f"order override {N} outside [1, {MAX_ORDER}]")
    root = sigma_r * math.sqrt(N)
    if T / root > math.pi / 2 + 1e-12:
        raise KernelOrderError(
            f"order {N} leaves |t|/(sigma_r sqrt(N)) = {T / root:.3f} outside the "
            f"monotone cosine lobe for T={T}"
        )
    n = np.arange(N + 1)
    # 2^-N C(N, n); the textbook recursion underflows for N > 1074, the
    # symmetric-binomial pmf is the numerically stable equivalent
    c = binom.pmf(n, N, 0.5)
    omega = (2.0 * n - N) / root
    return ShiftableKernel(N=N, c=c, omega=omega, T=float(T), sigma_r=float(sigma_r))
