"""Grayscale image denoising with optimally weighted bilateral filters."""

from .image import ImageError, Metrics, NoiseSpec, add_gaussian_noise, mse, psnr
from .pgmio import ImageIOError, read_image, read_pgm, read_pfm, to_uint8, write_image, write_pgm, write_pfm
from .spatial import SpatialKernel, box_filter, gaussian_filter
from .direct import BilateralParams, fd_derivative, guided_bilateral_direct, rbf_direct, sbf_direct
from .shiftable import KernelOrderError, ShiftableKernel, build_kernel, required_order
from .fast import DenominatorError, FilterOutput, default_kernel, fast_rbf, fast_sbf
from .sure import WbfResult, WeightSolution, combine, optimal_weights, sure, wbf

__version__ = "0.1.0"

__all__ = [
    "ImageError",
    "Metrics",
    "NoiseSpec",
    "add_gaussian_noise",
    "mse",
    "psnr",
    "ImageIOError",
    "read_image",
    "read_pgm",
    "read_pfm",
    "to_uint8",
    "write_image",
    "write_pgm",
    "write_pfm",
    "SpatialKernel",
    "box_filter",
    "gaussian_filter",
    "BilateralParams",
    "fd_derivative",
    "guided_bilateral_direct",
    "rbf_direct",
    "sbf_direct",
    "KernelOrderError",
    "ShiftableKernel",
    "build_kernel",
    "required_order",
    "DenominatorError",
    "FilterOutput",
    "default_kernel",
    "fast_rbf",
    "fast_sbf",
    "WbfResult",
    "WeightSolution",
    "combine",
    "optimal_weights",
    "sure",
    "wbf",
]
