import numpy as np
import pytest

from owbf.pgmio import (
    ImageIOError,
    pfm_from_bytes,
    pfm_to_bytes,
    read_image,
    read_pfm,
    read_pgm,
    to_uint8,
    write_image,
    write_pfm,
    write_pgm,
)


def test_pgm_round_trip(tmp_path):
    img = np.arange(256.0).reshape(16, 16) % 256
    path = tmp_path / "a.pgm"
    write_pgm(img, path)
    back = read_pgm(path)
    np.testing.assert_array_equal(back, img)


def test_pgm_header_comment(tmp_path):
    path = tmp_path / "c.pgm"
    path.write_bytes(b"P5\n# a comment\n2 2\n255\n" + bytes([0, 10, 200, 255]))
    img = read_pgm(path)
    np.testing.assert_array_equal(img, [[0.0, 10.0], [200.0, 255.0]])


def test_pgm_rejects_bad_files(tmp_path):
    p6 = tmp_path / "bad.pgm"
    p6.write_bytes(b"P6\n2 2\n255\n" + bytes(12))
    with pytest.raises(ImageIOError):
        read_pgm(p6)
    maxval = tmp_path / "maxval.pgm"
    maxval.write_bytes(b"P5\n2 2\n65535\n" + bytes(8))
    with pytest.raises(ImageIOError):
        read_pgm(maxval)
    short = tmp_path / "short.pgm"
    short.write_bytes(b"P5\n4 4\n255\n" + bytes(3))
    with pytest.raises(ImageIOError):
        read_pgm(short)


def test_to_uint8_clamps_and_rounds_half_away():
    img = np.array([[-3.0, 0.49, 0.5, 2.5], [254.5, 255.2, 199.99, 100.0]])
    q = to_uint8(img)
    np.testing.assert_array_equal(q, [[0, 0, 1, 3], [255, 255, 200, 100]])


def test_pfm_round_trip_bit_exact(tmp_path):
    img = np.array([[-3.25, 260.5, 0.0], [1.5, 127.125, -0.0625]])
    path = tmp_path / "f.pfm"
    write_pfm(img, path)
    back = read_pfm(path)
    # float32 storage: values exactly representable round-trip bit-exactly
    np.testing.assert_array_equal(back, img)


def test_pfm_bytes_round_trip():
    rng = np.random.default_rng(1)
    img = rng.uniform(-50, 350, (5, 7)).astype(np.float32).astype(np.float64)
    back = pfm_from_bytes(pfm_to_bytes(img))
    np.testing.assert_array_equal(back, img)


def test_pfm_rejects_color_and_truncated():
    with pytest.raises(ImageIOError):
        pfm_from_bytes(b"PF\n2 2\n-1.0\n" + bytes(48))
    with pytest.raises(ImageIOError):
        pfm_from_bytes(b"Pf\n4 4\n-1.0\n" + bytes(10))
    with pytest.raises(ImageIOError):
        pfm_from_bytes(b"Pf\n2 2\n0.0\n" + bytes(16))


def test_read_write_image_dispatch(tmp_path):
    img = np.full((3, 3), 7.0)
    write_image(img, tmp_path / "x.pgm")
    write_image(img, tmp_path / "x.pfm")
    np.testing.assert_array_equal(read_image(tmp_path / "x.pgm"), img)
    np.testing.assert_array_equal(read_image(tmp_path / "x.pfm"), img)
    with pytest.raises(ImageIOError):
        write_image(img, tmp_path / "x.png")
    with pytest.raises(ImageIOError):
        read_image(tmp_path / "x.png")
