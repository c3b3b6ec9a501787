from __future__ import annotations

import numpy as np
import pytest

from owbf.image import NoiseSpec, add_gaussian_noise
from owbf.spatial import SpatialKernel, gaussian_filter


def smooth_random(shape, seed, lo=20.0, hi=235.0, smooth_sigma=2.0):
    """Piecewise-smooth random test image spanning roughly [lo, hi]."""
    rng = np.random.default_rng(seed)
    base = gaussian_filter(rng.uniform(0.0, 255.0, shape), SpatialKernel(smooth_sigma))
    base = (base - base.min()) / (base.max() - base.min())
    return lo + (hi - lo) * base


def noisy_version(clean, sigma, seed=0):
    return add_gaussian_noise(clean, NoiseSpec(sigma=sigma, seed=seed))


@pytest.fixture(scope="session")
def camera_512():
    from skimage import data

    return data.camera().astype(np.float64)


@pytest.fixture(scope="session")
def cameraman_256(camera_512):
    # stand-in for the classic 256x256 cameraman scan
    return np.ascontiguousarray(camera_512[::2, ::2])


@pytest.fixture(scope="session")
def house_256(camera_512):
    # stand-in for the classic house test scan (not redistributable here)
    return np.ascontiguousarray(camera_512[::2, ::2])


@pytest.fixture(scope="session")
def peppers_256():
    from skimage import data
    from skimage.color import rgb2gray

    return np.ascontiguousarray(255.0 * rgb2gray(data.astronaut())[::2, ::2])


@pytest.fixture
def announce(capsys):
    """Print a live line even under pytest's output capture."""

    def _announce(text):
        with capsys.disabled():
            print(text, flush=True)

    return _announce
