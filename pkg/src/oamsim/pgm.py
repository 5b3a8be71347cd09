"""Binary PGM (P5) image files.

PGM is the golden-file format here because it is bit-exact and trivially
diffable: a three-line ASCII header followed by raw samples, top row
first, 8-bit or big-endian 16-bit.  Writers are deterministic (no
comments, no timestamps), so repeated runs of the same command produce
byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

_MAX16 = 65535


def write_pgm8(path, gray: np.ndarray) -> None:
    """Write an 8-bit grayscale image (values 0..255, shape (H, W))."""
    arr = np.asarray(gray)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D image, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("8-bit PGM requires values in 0..255")
        arr = arr.astype(np.uint8)
    h, w = arr.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(arr.tobytes())


def write_pgm16(path, values: np.ndarray) -> None:
    """Write a 16-bit image from raw integer values (0..65535)."""
    arr = np.asarray(values)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D image, got shape {arr.shape}")
    if arr.min() < 0 or arr.max() > _MAX16:
        raise ValueError("16-bit PGM requires values in 0..65535")
    arr = arr.astype(">u2")
    h, w = arr.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n{_MAX16}\n".encode("ascii"))
        fh.write(arr.tobytes())


def write_pgm16_scaled(path, values: np.ndarray) -> None:
    """Write a nonnegative float image scaled so its maximum maps to 65535.

    An all-zero image stays all zero.  Values are rounded to nearest.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D image, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or arr.min() < 0:
        raise ValueError("image must be finite and nonnegative")
    peak = arr.max()
    scaled = np.rint(arr * (_MAX16 / peak)) if peak > 0 else np.zeros_like(arr)
    write_pgm16(path, scaled.astype(np.uint16))


def _read_token(fh) -> bytes:
    """Next whitespace-delimited header token, skipping '#' comments."""
    token = b""
    while True:
        ch = fh.read(1)
        if not ch:
            raise ValueError("truncated PGM header")
        if ch == b"#":
            while ch not in (b"\n", b""):
                ch = fh.read(1)
            continue
        if ch.isspace():
            if token:
                return token
            continue
        token += ch


def read_pgm(path) -> np.ndarray:
    """Read a binary PGM; returns uint8 (maxval < 256) or uint16 values."""
    with open(path, "rb") as fh:
        magic = _read_token(fh)
        if magic != b"P5":
            raise ValueError(f"{path}: not a binary PGM (magic {magic!r})")
        w = int(_read_token(fh))
        h = int(_read_token(fh))
        maxval = int(_read_token(fh))
        if not (0 < maxval <= _MAX16):
            raise ValueError(f"{path}: invalid maxval {maxval}")
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        data = fh.read(w * h * dtype.itemsize)
        if len(data) != w * h * dtype.itemsize:
            raise ValueError(f"{path}: truncated pixel data")
        arr = np.frombuffer(data, dtype=dtype).reshape(h, w)
        return arr.astype(np.uint16) if maxval > 255 else arr.copy()


def pgm_path(directory, stem: str, suffix: str) -> Path:
    """Conventional output path <directory>/<stem>_<suffix>.pgm."""
    return Path(directory) / f"{stem}_{suffix}.pgm"
