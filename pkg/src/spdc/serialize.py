"""Binary dataset and matrix-dump formats (all little-endian).

SPD dataset (``.spds``)::

    b"SPDS" | u32 version=1 | u32 N | u32 d | u8 has_labels
    N * d * d float64, row-major
    N u32 labels (only if has_labels)

Matrix dump (``.f64``): raw float64 row-major, with a sidecar ``<file>.txt``
holding ``rows <r>`` and ``cols <c>`` lines.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import UsageError
from .spd import make_spd

SPDS_MAGIC = b"SPDS"
SPDS_VERSION = 1
_HEADER = struct.Struct("<4sIIIB")


def write_spds(path, data, labels=None) -> None:
    data = np.asarray(data, dtype="<f8")
    if data.ndim != 3 or data.shape[1] != data.shape[2]:
        raise UsageError(f"expected (N, d, d) matrices, got {data.shape}")
    n, d = data.shape[0], data.shape[1]
    parts = [_HEADER.pack(SPDS_MAGIC, SPDS_VERSION, n, d, labels is not None), data.tobytes()]
    if labels is not None:
        labels = np.asarray(labels)
        if labels.shape != (n,) or np.any(labels < 0):
            raise UsageError("labels must be N nonnegative integers")
        parts.append(labels.astype("<u4").tobytes())
    Path(path).write_bytes(b"".join(parts))


def read_spds_header(path) -> dict:
    buf = Path(path).read_bytes()[: _HEADER.size]
    if len(buf) < _HEADER.size:
        raise UsageError(f"{path}: truncated SPDS header")
    magic, version, n, d, has_labels = _HEADER.unpack(buf)
    if magic != SPDS_MAGIC:
        raise UsageError(f"{path}: bad magic {magic!r}")
    if version != SPDS_VERSION:
        raise UsageError(f"{path}: unsupported version {version}")
    return {"version": version, "N": n, "d": d, "has_labels": bool(has_labels)}


def read_spds(path, floor: float | None = None):
    """Load an SPD dataset; returns ``(data, labels_or_None, n_repaired)``.

    Matrices that are already symmetric with smallest eigenvalue at or above
    ``floor`` are returned bit-exact; the others are projected with
    :func:`make_spd`.
    """
    hdr = read_spds_header(path)
    n, d = hdr["N"], hdr["d"]
    buf = Path(path).read_bytes()
    expect = _HEADER.size + 8 * n * d * d + (4 * n if hdr["has_labels"] else 0)
    if len(buf) != expect:
        raise UsageError(f"{path}: expected {expect} bytes, found {len(buf)}")
    off = _HEADER.size
    data = np.frombuffer(buf, dtype="<f8", count=n * d * d, offset=off).reshape(n, d, d).astype(np.float64)
    labels = None
    if hdr["has_labels"]:
        labels = np.frombuffer(buf, dtype="<u4", count=n, offset=off + 8 * n * d * d).astype(np.int64)
    if not np.all(np.isfinite(data)):
        raise UsageError(f"{path}: non-finite matrix entries")
    repaired = 0
    for i in range(n):
        X = data[i]
        f = floor if floor is not None else 0.0
        if np.array_equal(X, X.T) and np.linalg.eigvalsh(X)[0] >= max(f, np.finfo(float).tiny):
            continue
        data[i] = make_spd(X, floor)
        repaired += 1
    return data, labels, repaired


def write_f64(path, M) -> None:
    M = np.asarray(M, dtype="<f8")
    if M.ndim != 2:
        raise UsageError("only 2-D matrices can be dumped")
    path = Path(path)
    path.write_bytes(M.tobytes())
    Path(str(path) + ".txt").write_text(f"rows {M.shape[0]}\ncols {M.shape[1]}\ndtype float64-le\n")


def read_f64(path) -> np.ndarray:
    path = Path(path)
    meta = {}
    for line in Path(str(path) + ".txt").read_text().splitlines():
        if line.strip():
            key, val = line.split(None, 1)
            meta[key] = val.strip()
    rows, cols = int(meta["rows"]), int(meta["cols"])
    buf = path.read_bytes()
    if len(buf) != 8 * rows * cols:
        raise UsageError(f"{path}: expected {8 * rows * cols} bytes, found {len(buf)}")
    return np.frombuffer(buf, dtype="<f8").reshape(rows, cols).astype(np.float64)
