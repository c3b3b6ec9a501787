"""Unbiased risk estimation and the optimally weighted filter.

The risk estimate is computable from the noisy image alone; its expectation
equals the true MSE under the additive Gaussian noise model, which makes it
a usable surrogate for picking the pixelwise mixing weights of the standard
and robust bilateral estimates.  The optimal weights solve a 2x2 linear
system (the risk is quadratic in them).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .direct import BilateralParams
from .fast import FilterOutput, default_kernel, fast_rbf, fast_sbf
from .image import ImageError, as_image
from .shiftable import ShiftableKernel

COND_LIMIT = 1e12


@dataclass(frozen=True)
class WeightSolution:
    A: np.ndarray  # 2x2 Gram matrix of the two estimates
    b: np.ndarray
    theta: np.ndarray
    sure_sbf: float
    sure_rbf: float
    sure_wbf: float
    degenerate: bool


@dataclass(frozen=True)
class WbfResult:
    estimate: np.ndarray
    weights: WeightSolution
    kernel: ShiftableKernel
    sbf: FilterOutput
    rbf: FilterOutput


def sure(noisy, out: FilterOutput, sigma: float) -> float:
    """Risk estimate: residual energy - sigma^2 + 2 sigma^2 * mean divergence."""
    noisy = as_image(noisy)
    if sigma <= 0:
        raise ImageError(f"sigma must be > 0, got {sigma}")
    if out.estimate.shape != noisy.shape:
        raise ImageError(
            f"estimate dimensions {out.estimate.shape} differ from noisy {noisy.shape}"
        )
    r = out.estimate - noisy
    return float(
        np.mean(r * r) - sigma**2 + 2.0 * sigma**2 * np.mean(out.self_derivative)
    )


def combine(out1: FilterOutput, out2: FilterOutput, theta) -> np.ndarray:
    if out1.estimate.shape != out2.estimate.shape:
        raise ImageError("estimates have different dimensions")
    t1, t2 = float(theta[0]), float(theta[1])
    return t1 * out1.estimate + t2 * out2.estimate


def _combined_output(out1: FilterOutput, out2: FilterOutput, theta) -> FilterOutput:
    t1, t2 = float(theta[0]), float(theta[1])
    return FilterOutput(
        estimate=t1 * out1.estimate + t2 * out2.estimate,
        self_derivative=t1 * out1.self_derivative + t2 * out2.self_derivative,
    )


def optimal_weights(noisy, out1: FilterOutput, out2: FilterOutput, sigma: float) -> WeightSolution:
    noisy = as_image(noisy)
    f1, f2 = out1.estimate, out2.estimate
    if f1.shape != noisy.shape or f2.shape != noisy.shape:
        raise ImageError("estimate dimensions differ from noisy image")
    A = np.array(
        [
            [np.sum(f1 * f1), np.sum(f1 * f2)],
            [np.sum(f1 * f2), np.sum(f2 * f2)],
        ]
    )
    b = np.array(
        [
            np.sum(noisy * f1) - sigma**2 * np.sum(out1.self_derivative),
            np.sum(noisy * f2) - sigma**2 * np.sum(out2.self_derivative),
        ]
    )
    sure_sbf = sure(noisy, out1, sigma)
    sure_rbf = sure(noisy, out2, sigma)

    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    trace = A[0, 0] + A[1, 1]
    degenerate = det <= 1e-12 * trace**2 / 4.0 or np.linalg.cond(A) > COND_LIMIT
    if degenerate:
        theta = np.array([1.0, 0.0]) if sure_sbf <= sure_rbf else np.array([0.0, 1.0])
    else:
        theta = np.linalg.solve(A, b)
        theta += np.linalg.solve(A, b - A @ theta)  # one refinement step
    sure_wbf = sure(noisy, _combined_output(out1, out2, theta), sigma)
    return WeightSolution(
        A=A,
        b=b,
        theta=theta,
        sure_sbf=sure_sbf,
        sure_rbf=sure_rbf,
        sure_wbf=sure_wbf,
        degenerate=bool(degenerate),
    )


def wbf(noisy, p: BilateralParams, sigma: float, N_override: int | None = None) -> WbfResult:
    """Optimally weighted combination of the standard and robust estimates.

    One shiftable kernel is shared by both filters: the box-filtered guide's
    spread is a subset of the image's, so the kernel built for the image
    covers it.
    """
    img = as_image(noisy)
    if sigma <= 0:
        raise ImageError(f"sigma must be > 0, got {sigma}")
    kernel = default_kernel(img, p, N_override)
    out1 = fast_sbf(img, p, kernel)
    out2 = fast_rbf(img, p, kernel)
    weights = optimal_weights(img, out1, out2, sigma)
    return WbfResult(
        estimate=combine(out1, out2, weights.theta),
        weights=weights,
        kernel=kernel,
        sbf=out1,
        rbf=out2,
    )
