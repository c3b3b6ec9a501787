"""Command-level operations shared by the HTTP service and its CLI client."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .direct import BilateralParams, _localized_eval, rbf_direct, sbf_direct
from .fast import FilterOutput, default_kernel, fast_rbf, fast_sbf
from .image import ImageError, NoiseSpec, add_gaussian_noise, psnr
from .sure import combine, optimal_weights, sure, wbf

FD_STEP = 1e-3


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("OWBF_THREADS", "1"))
    if threads < 1:
        raise ImageError(f"threads must be >= 1, got {threads}")
    return threads


def _metrics_fields(est: np.ndarray, clean: np.ndarray | None) -> dict:
    if clean is None:
        return {}
    m = psnr(est, clean)
    return {"mse": m.mse, "psnr_db": m.psnr_db}


def add_noise_op(clean: np.ndarray, sigma: float, seed: int) -> dict:
    noisy = add_gaussian_noise(clean, NoiseSpec(sigma=sigma, seed=seed))
    m = psnr(noisy, clean)
    return {"image": noisy, "mse": m.mse, "psnr_db": m.psnr_db}


def _direct_output_with_fd(img: np.ndarray, p: BilateralParams, kind: str) -> FilterOutput:
    """Direct estimate plus a full finite-difference self-derivative field.

    Only used when the caller explicitly enables the FD oracle; cost is two
    localized re-evaluations per pixel.
    """
    est = sbf_direct(img, p) if kind == "sbf" else rbf_direct(img, p)
    deriv = np.empty_like(img)
    h = FD_STEP
    for y in range(img.shape[0]):
        for x in range(img.shape[1]):
            hi = img.copy()
            lo = img.copy()
            hi[y, x] += h
            lo[y, x] -= h
            deriv[y, x] = (
                _localized_eval(kind, hi, p, y, x) - _localized_eval(kind, lo, p, y, x)
            ) / (2.0 * h)
    return FilterOutput(estimate=est, self_derivative=deriv)


def denoise_op(
    noisy: np.ndarray,
    filter_name: str,
    impl: str,
    p: BilateralParams,
    sigma: float | None,
    clean: np.ndarray | None = None,
    n_override: int | None = None,
    fd_enabled: bool = False,
    compare: bool = False,
) -> dict:
    """Run one denoise command; returns the estimate plus diagnostics."""
    if filter_name not in ("sbf", "rbf", "wbf"):
        raise ImageError(f"unknown filter {filter_name!r}")
    if impl not in ("direct", "fast"):
        raise ImageError(f"unknown impl {impl!r}")
    if filter_name == "wbf" and sigma is None:
        raise ImageError("the weighted filter requires --sigma")
    if filter_name == "wbf" and impl == "direct" and not fd_enabled:
        raise ImageError(
            "direct weighted filtering needs finite-difference derivatives; "
            "pass the FD flag to enable them (slow)"
        )

    diag: dict = {}
    t0 = time.perf_counter()
    if filter_name == "wbf":
        if impl == "fast":
            res = wbf(noisy, p, sigma, N_override=n_override)
            est = res.estimate
            diag.update(
                n_terms=res.kernel.N,
                T=res.kernel.T,
                theta=[float(t) for t in res.weights.theta],
                sure_sbf=res.weights.sure_sbf,
                sure_rbf=res.weights.sure_rbf,
                sure_wbf=res.weights.sure_wbf,
                degenerate=res.weights.degenerate,
            )
        else:
            out1 = _direct_output_with_fd(noisy, p, "sbf")
            out2 = _direct_output_with_fd(noisy, p, "rbf")
            weights = optimal_weights(noisy, out1, out2, sigma)
            est = combine(out1, out2, weights.theta)
            diag.update(
                theta=[float(t) for t in weights.theta],
                sure_sbf=weights.sure_sbf,
                sure_rbf=weights.sure_rbf,
                sure_wbf=weights.sure_wbf,
                degenerate=weights.degenerate,
            )
    else:
        if impl == "fast":
            kernel = default_kernel(noisy, p, n_override)
            run = fast_sbf if filter_name == "sbf" else fast_rbf
            out = run(noisy, p, kernel)
            est = out.estimate
            diag.update(n_terms=kernel.N, T=kernel.T)
            if sigma is not None:
                diag[f"sure_{filter_name}"] = sure(noisy, out, sigma)
        else:
            run = sbf_direct if filter_name == "sbf" else rbf_direct
            est = run(noisy, p)
            if sigma is not None and fd_enabled:
                out = _direct_output_with_fd(noisy, p, filter_name)
                diag[f"sure_{filter_name}"] = sure(noisy, out, sigma)
    diag["time_s"] = time.perf_counter() - t0

    if compare:
        if filter_name == "wbf":
            raise ImageError("impl comparison is only available for sbf and rbf")
        other_run = (
            (sbf_direct if filter_name == "sbf" else rbf_direct)
            if impl == "fast"
            else None
        )
        if other_run is not None:
            other = other_run(noisy, p)
        else:
            kernel = default_kernel(noisy, p, n_override)
            run = fast_sbf if filter_name == "sbf" else fast_rbf
            other = run(noisy, p, kernel).estimate
        diag["max_abs_diff"] = float(np.max(np.abs(est - other)))

    diag.update(_metrics_fields(est, clean))
    return {"image": est, "diagnostics": diag}


def sweep_op(
    noisy: np.ndarray,
    filter_name: str,
    impl: str,
    p_base: BilateralParams,
    sigma: float | None,
    sigma_s_values,
    sigma_r_values,
    clean: np.ndarray | None = None,
    threads: int = 1,
    fd_enabled: bool = False,
) -> dict:
    """Grid sweep over (sigma_s, sigma_r); returns one row per combination."""
    combos = [(float(ss), float(sr)) for ss in sigma_s_values for sr in sigma_r_values]
    if not combos:
        raise ImageError("empty sweep grid")

    def one(combo):
        ss, sr = combo
        p = BilateralParams(
            sigma_s=ss, sigma_r=sr, box_half_width=p_base.box_half_width
        )
        r = denoise_op(
            noisy, filter_name, impl, p, sigma, clean=clean, fd_enabled=fd_enabled
        )
        row = {"sigma_s": ss, "sigma_r": sr}
        row.update(r["diagnostics"])
        return row

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            rows = list(ex.map(one, combos))
    else:
        rows = [one(c) for c in combos]

    sure_key = f"sure_{filter_name}" if filter_name != "wbf" else "sure_wbf"
    best_psnr = best_sure = None
    if any("psnr_db" in r for r in rows):
        best_psnr = max(range(len(rows)), key=lambda i: rows[i].get("psnr_db", -math.inf))
    if any(sure_key in r for r in rows):
        best_sure = min(range(len(rows)), key=lambda i: rows[i].get(sure_key, math.inf))
    for i, r in enumerate(rows):
        r["best_psnr"] = i == best_psnr
        r["best_sure"] = i == best_sure
    return {"rows": rows}


def bench_op(img: np.ndarray, settings, repeats: int, L: int = 1) -> dict:
    """Wall-time comparison of the direct and fast pipelines (standard +
    robust estimates, the work a weighted filtering run is dominated by)."""
    if repeats < 1:
        raise ImageError(f"repeats must be >= 1, got {repeats}")
    cells = []
    for ss, sr in settings:
        p = BilateralParams(sigma_s=float(ss), sigma_r=float(sr), box_half_width=L)
        direct_times = []
        fast_times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            d1 = sbf_direct(img, p)
            d2 = rbf_direct(img, p)
            direct_times.append(time.perf_counter() - t0)
            t0 = time.perf_counter()
            kernel = default_kernel(img, p)
            f1 = fast_sbf(img, p, kernel)
            f2 = fast_rbf(img, p, kernel)
            fast_times.append(time.perf_counter() - t0)
        diff = max(
            float(np.max(np.abs(f1.estimate - d1))),
            float(np.max(np.abs(f2.estimate - d2))),
        )
        cells.append(
            {
                "sigma_s": float(ss),
                "sigma_r": float(sr),
                "direct_mean_s": float(np.mean(direct_times)),
                "direct_min_s": float(np.min(direct_times)),
                "fast_mean_s": float(np.mean(fast_times)),
                "fast_min_s": float(np.min(fast_times)),
                "max_abs_diff": diff,
            }
        )
    return {"cells": cells}
