import numpy as np
import pytest

from owbf.direct import (
    BilateralParams,
    _localized_eval,
    fd_derivative,
    guided_bilateral_direct,
    rbf_direct,
    sbf_direct,
)
from owbf.image import ImageError
from owbf.spatial import SpatialKernel, box_filter, gaussian_filter

from conftest import noisy_version, smooth_random
from oracles import bilateral_oracle


def test_params_validation():
    with pytest.raises(ImageError):
        BilateralParams(sigma_s=0.0, sigma_r=10.0)
    with pytest.raises(ImageError):
        BilateralParams(sigma_s=1.0, sigma_r=0.0)
    with pytest.raises(ImageError):
        BilateralParams(sigma_s=1.0, sigma_r=10.0, box_half_width=0)
    assert BilateralParams(sigma_s=2.0, sigma_r=10.0).half_width == 6


def test_constant_image_fixed_point():
    img = np.full((10, 10), 57.0)
    p = BilateralParams(sigma_s=1.5, sigma_r=20.0)
    np.testing.assert_allclose(sbf_direct(img, p), img, atol=1e-12)
    np.testing.assert_allclose(rbf_direct(img, p), img, atol=1e-12)


def test_huge_sigma_r_reduces_to_gaussian_smoothing():
    f = smooth_random((12, 12), 3)
    p = BilateralParams(sigma_s=1.5, sigma_r=1e12)
    k = SpatialKernel(1.5)
    expect = gaussian_filter(f, k) / gaussian_filter(np.ones_like(f), k)
    np.testing.assert_allclose(sbf_direct(f, p), expect, atol=1e-8)


def test_matches_quadruple_loop_oracle():
    f = noisy_version(smooth_random((8, 8), 5), 10.0, 5)
    p = BilateralParams(sigma_s=1.5, sigma_r=25.0)
    oracle = bilateral_oracle(f, f, 1.5, 25.0, p.half_width)
    np.testing.assert_allclose(sbf_direct(f, p), oracle, atol=1e-12)
    guide = box_filter(f, 1)
    oracle_r = bilateral_oracle(f, guide, 1.5, 25.0, p.half_width)
    np.testing.assert_allclose(rbf_direct(f, p), oracle_r, atol=1e-12)


def test_sbf_is_self_guided():
    f = noisy_version(smooth_random((9, 9), 6), 5.0, 6)
    p = BilateralParams(sigma_s=1.0, sigma_r=30.0)
    np.testing.assert_array_equal(sbf_direct(f, p), guided_bilateral_direct(f, f, p))


def test_output_within_input_range():
    f = noisy_version(smooth_random((16, 16), 7), 15.0, 7)
    p = BilateralParams(sigma_s=2.0, sigma_r=30.0)
    out = sbf_direct(f, p)
    assert out.min() >= f.min() - 1e-10
    assert out.max() <= f.max() + 1e-10


def test_guide_shift_invariance():
    f = noisy_version(smooth_random((10, 10), 8), 10.0, 8)
    g = box_filter(f, 1)
    p = BilateralParams(sigma_s=1.5, sigma_r=25.0)
    a = guided_bilateral_direct(f, g, p)
    b = guided_bilateral_direct(f, g + 100.0, p)
    np.testing.assert_allclose(a, b, atol=1e-10)


def test_transpose_symmetry():
    f = noisy_version(smooth_random((9, 13), 9), 10.0, 9)
    g = box_filter(f, 1)
    p = BilateralParams(sigma_s=1.5, sigma_r=25.0)
    a = guided_bilateral_direct(f, g, p)
    b = guided_bilateral_direct(f.T.copy(), g.T.copy(), p)
    # row-major window summation reorders terms under transpose, so equality
    # holds to rounding, not bitwise
    np.testing.assert_allclose(a.T, b, atol=1e-10)


def test_dimension_mismatch():
    p = BilateralParams(sigma_s=1.0, sigma_r=10.0)
    with pytest.raises(ImageError):
        guided_bilateral_direct(np.ones((8, 8)), np.ones((8, 9)), p)


def test_window_too_large():
    p = BilateralParams(sigma_s=3.0, sigma_r=10.0)  # W = 9
    with pytest.raises(ImageError):
        sbf_direct(np.ones((8, 8)), p)


def test_localized_eval_agrees_with_full_filter():
    f = noisy_version(smooth_random((16, 16), 10), 10.0, 10)
    p = BilateralParams(sigma_s=1.5, sigma_r=30.0)
    full_s = sbf_direct(f, p)
    full_r = rbf_direct(f, p)
    for (y, x) in [(0, 0), (3, 7), (8, 8), (15, 15), (0, 9)]:
        assert _localized_eval("sbf", f, p, y, x) == pytest.approx(full_s[y, x], abs=1e-11)
        assert _localized_eval("rbf", f, p, y, x) == pytest.approx(full_r[y, x], abs=1e-11)


def test_fd_identity_and_box():
    f = smooth_random((10, 10), 11)
    p = BilateralParams(sigma_s=1.0, sigma_r=10.0)
    ident = fd_derivative("identity", f, p, [(2, 2), (5, 7)])
    assert ident == pytest.approx([1.0, 1.0], abs=1e-9)
    interior = fd_derivative("box", f, p, [(4, 4), (5, 5)])
    assert interior == pytest.approx([1.0 / 9.0, 1.0 / 9.0], abs=1e-9)


def test_fd_validation():
    f = smooth_random((10, 10), 12)
    p = BilateralParams(sigma_s=1.0, sigma_r=10.0)
    with pytest.raises(ImageError):
        fd_derivative("identity", f, p, [(10, 0)])
    with pytest.raises(ImageError):
        fd_derivative("identity", f, p, [(0, 0)], h=0.0)
    with pytest.raises(ImageError):
        fd_derivative("nope", f, p, [(0, 0)])
