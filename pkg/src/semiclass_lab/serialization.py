"""File emitters: PGM rasters, fixed-precision CSV tables, and a small
binary container for states and operators."""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"SCLB"
KIND_STATE = b"S"
KIND_OPERATOR = b"O"


def write_pgm(grid, path) -> None:
    """Binary PGM: header "P5\\n<w> <h>\\n255\\n", max-normalized row-major
    bytes. An all-zero grid stays all zero."""
    grid = np.asarray(grid, float)
    if grid.ndim != 2 or grid.size == 0:
        raise ValueError("grid must be a nonempty 2-D array")
    height, width = grid.shape
    peak = grid.max()
    scaled = np.zeros(grid.shape, np.uint8) if peak <= 0 else \
        np.clip(np.rint(grid / peak * 255), 0, 255).astype(np.uint8)
    with open(path, "wb") as f:
        f.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        f.write(scaled.tobytes())


def format_value(v) -> str:
    """CSV cell: integers verbatim, floats at 12 significant digits."""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_state(path, array, kind: bytes = KIND_STATE) -> None:
    """Binary container: magic, kind byte, uint32 N little-endian, then
    row-major little-endian complex doubles (N entries for a state, N^2 for
    an operator)."""
    array = np.ascontiguousarray(array, dtype=np.complex128)
    if kind == KIND_STATE:
        if array.ndim != 1:
            raise ValueError("state container expects a 1-D array")
        N = array.shape[0]
    elif kind == KIND_OPERATOR:
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValueError("operator container expects a square matrix")
        N = array.shape[0]
    else:
        raise ValueError(f"unknown container kind {kind!r}")
    with open(path, "wb") as f:
        f.write(MAGIC + kind + struct.pack("<I", N))
        f.write(array.astype("<c16").tobytes())


def read_state(path):
    """Inverse of write_state; returns (array, kind)."""
    raw = Path(path).read_bytes()
    if raw[:4] != MAGIC:
        raise ValueError("bad magic; not a state container")
    kind = raw[4:5]
    (N,) = struct.unpack("<I", raw[5:9])
    data = np.frombuffer(raw[9:], dtype="<c16").astype(np.complex128)
    if kind == KIND_STATE:
        return data[:N].copy(), kind
    if kind == KIND_OPERATOR:
        return data[: N * N].reshape(N, N).copy(), kind
    raise ValueError(f"unknown container kind {kind!r}")
