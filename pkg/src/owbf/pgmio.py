"""Reading and writing images as binary PGM (P5, 8-bit) and grayscale PFM.

PGM is used for clean 8-bit inputs and quantized outputs; PFM stores
unclipped float images (noisy realizations, intermediate results).
Per PFM convention rows are stored bottom-up and a negative scale marks
little-endian data.
"""

from __future__ import annotations

import os

import numpy as np

from .image import as_image


class ImageIOError(ValueError):
    pass


def _read_pnm_tokens(data: bytes, count: int):
    """Return the first `count` whitespace-separated header tokens (with
    '#' comment support) and the offset just past the single whitespace
    byte that terminates the last one."""
    tokens = []
    i = 0
    while len(tokens) < count:
        if i >= len(data):
            raise ImageIOError("truncated header")
        c = data[i : i + 1]
        if c == b"#":
            while i < len(data) and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
                j += 1
            tokens.append(data[i:j])
            i = j
    if i >= len(data) or not data[i : i + 1].isspace():
        raise ImageIOError("malformed header: missing whitespace after header")
    return tokens, i + 1


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P5"):
        raise ImageIOError(f"{path}: not a binary (P5) PGM file")
    tokens, offset = _read_pnm_tokens(data, 4)
    try:
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError as exc:
        raise ImageIOError(f"{path}: malformed PGM header") from exc
    if width <= 0 or height <= 0:
        raise ImageIOError(f"{path}: bad dimensions {width}x{height}")
    if maxval != 255:
        raise ImageIOError(f"{path}: unsupported maxval {maxval} (only 255)")
    payload = data[offset : offset + width * height]
    if len(payload) < width * height:
        raise ImageIOError(f"{path}: truncated pixel data")
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width).astype(np.float64)


def to_uint8(img) -> np.ndarray:
    """Quantize to 8 bits: clamp to [0, 255], round half away from zero."""
    img = as_image(img)
    return np.floor(np.clip(img, 0.0, 255.0) + 0.5).astype(np.uint8)


def write_pgm(img, path) -> None:
    q = to_uint8(img)
    h, w = q.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(q.tobytes())


def pfm_from_bytes(data: bytes, name: str = "<bytes>") -> np.ndarray:
    path = name
    if data.startswith(b"PF"):
        raise ImageIOError(f"{path}: color PFM is not supported")
    if not data.startswith(b"Pf"):
        raise ImageIOError(f"{path}: not a grayscale PFM file")
    tokens, offset = _read_pnm_tokens(data, 4)
    try:
        width, height = int(tokens[1]), int(tokens[2])
        scale = float(tokens[3])
    except ValueError as exc:
        raise ImageIOError(f"{path}: malformed PFM header") from exc
    if width <= 0 or height <= 0 or scale == 0.0:
        raise ImageIOError(f"{path}: malformed PFM header")
    dtype = "<f4" if scale < 0 else ">f4"
    payload = data[offset : offset + 4 * width * height]
    if len(payload) < 4 * width * height:
        raise ImageIOError(f"{path}: truncated pixel data")
    img = np.frombuffer(payload, dtype=dtype).reshape(height, width)
    return np.flipud(img).astype(np.float64)  # stored bottom-up


def read_pfm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    return pfm_from_bytes(data, name=str(path))


def pfm_to_bytes(img) -> bytes:
    img = as_image(img)
    h, w = img.shape
    rows = np.flipud(img).astype("<f4")
    return b"Pf\n%d %d\n-1.0\n" % (w, h) + rows.tobytes()


def write_pfm(img, path) -> None:
    with open(path, "wb") as fh:
        fh.write(pfm_to_bytes(img))


def read_image(path) -> np.ndarray:
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".pgm":
        return read_pgm(path)
    if ext == ".pfm":
        return read_pfm(path)
    raise ImageIOError(f"{path}: unsupported format {ext!r} (use .pgm or .pfm)")


def write_image(img, path) -> None:
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".pgm":
        write_pgm(img, path)
    elif ext == ".pfm":
        write_pfm(img, path)
    else:
        raise ImageIOError(f"{path}: unsupported format {ext!r} (use .pgm or .pfm)")
