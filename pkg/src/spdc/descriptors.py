"""Region covariance descriptors from grayscale images.

Images are 2-D float arrays indexed ``[y, x]`` with intensities in [0, 1].
Regions are ``(x0, y0, w, h)`` tuples.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import UsageError
from .spd import make_spd

TEXTURE_CHANNELS = ("I", "|dI/dx|", "|dI/dy|", "|d2I/dx2|", "|d2I/dy2|")
RCMF_MAGIC = b"RCMF"


@dataclass(frozen=True)
class FeatureStack:
    channels: np.ndarray  # (d, H, W)
    channel_names: tuple

    @property
    def dim(self) -> int:
        return self.channels.shape[0]

    @property
    def height(self) -> int:
        return self.channels.shape[1]

    @property
    def width(self) -> int:
        return self.channels.shape[2]


def as_image(img) -> np.ndarray:
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise UsageError(f"expected a 2-D grayscale image, got shape {img.shape}")
    if not np.all(np.isfinite(img)):
        raise UsageError("image has non-finite pixels")
    return img


def texture_features(img) -> FeatureStack:
    """Per-pixel ``(I, |I_x|, |I_y|, |I_xx|, |I_yy|)``.

    Central differences ``[-1, 0, 1] / 2`` and ``[1, -2, 1]`` with edge
    replication at the borders.
    """
    img = as_image(img)
    h, w = img.shape
    if h < 3 or w < 3:
        raise UsageError(f"image must be at least 3x3, got {w}x{h}")
    P = np.pad(img, 1, mode="edge")
    c = P[1:-1, 1:-1]
    left, right = P[1:-1, :-2], P[1:-1, 2:]
    up, down = P[:-2, 1:-1], P[2:, 1:-1]
    channels = np.stack([
        img,
        np.abs(right - left) / 2.0,
        np.abs(down - up) / 2.0,
        np.abs(right - 2.0 * c + left),
        np.abs(down - 2.0 * c + up),
    ])
    return FeatureStack(channels, TEXTURE_CHANNELS)


def region_covariance(stack: FeatureStack, region, floor: float | None = None) -> np.ndarray:
    """Sample covariance (divisor n - 1) of the feature vectors in ``region``,
    made SPD by eigenvalue flooring."""
    x0, y0, w, h = (int(v) for v in region)
    if x0 < 0 or y0 < 0 or w < 1 or h < 1 or x0 + w > stack.width or y0 + h > stack.height:
        raise UsageError(f"region {region} outside {stack.width}x{stack.height} image")
    if w * h < 2:
        raise UsageError("region must contain at least two pixels")
    F = stack.channels[:, y0 : y0 + h, x0 : x0 + w].reshape(stack.dim, -1)
    F = F - F.mean(axis=1, keepdims=True)
    cov = F @ F.T / (F.shape[1] - 1)
    return make_spd(cov, floor)


def grid_regions(img, tile: int) -> list:
    """Non-overlapping ``tile x tile`` regions in row-major order."""
    h, w = np.shape(img)[:2]
    if tile < 1 or w % tile or h % tile:
        raise UsageError(f"{w}x{h} image is not divisible into {tile}x{tile} tiles")
    return [(x, y, tile, tile) for y in range(0, h, tile) for x in range(0, w, tile)]


def describe_image(img, tile: int = 32, floor: float | None = None) -> np.ndarray:
    """Covariance descriptors of every tile, shape ``(n_tiles, 5, 5)``."""
    stack = texture_features(img)
    return np.stack([region_covariance(stack, r, floor) for r in grid_regions(img, tile)])


# --- image files ---------------------------------------------------------

def _pgm_tokens(buf: bytes, count: int):
    tokens, pos = [], 2
    while len(tokens) < count:
        while pos < len(buf) and buf[pos : pos + 1].isspace():
            pos += 1
        if buf[pos : pos + 1] == b"#":
            while pos < len(buf) and buf[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(buf) and not buf[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise UsageError("truncated PGM header")
        tokens.append(int(buf[start:pos]))
    return tokens, pos + 1


def read_pgm(path) -> np.ndarray:
    """Binary PGM (P5); 8-bit, or 16-bit big-endian when maxval > 255."""
    buf = Path(path).read_bytes()
    if buf[:2] != b"P5":
        raise UsageError(f"{path}: not a binary PGM (P5) file")
    try:
        (w, h, maxval), offset = _pgm_tokens(buf, 3)
    except ValueError as exc:
        raise UsageError(f"{path}: malformed PGM header") from exc
    if not 0 < maxval < 65536:
        raise UsageError(f"{path}: bad maxval {maxval}")
    dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
    nbytes = w * h * np.dtype(dtype).itemsize
    data = buf[offset : offset + nbytes]
    if len(data) != nbytes:
        raise UsageError(f"{path}: expected {nbytes} pixel bytes, found {len(data)}")
    return np.frombuffer(data, dtype=dtype).reshape(h, w).astype(np.float64) / maxval


def write_pgm(path, img) -> None:
    img = as_image(img)
    h, w = img.shape
    px = np.round(np.clip(img, 0.0, 1.0) * 255).astype(np.uint8)
    Path(path).write_bytes(b"P5\n%d %d\n255\n" % (w, h) + px.tobytes())


def read_rcmf(path) -> np.ndarray:
    """Raw float32 image: ``RCMF`` magic, u32 width, u32 height, u32 reserved."""
    buf = Path(path).read_bytes()
    if len(buf) < 16 or buf[:4] != RCMF_MAGIC:
        raise UsageError(f"{path}: not an RCMF file")
    w, h, _ = struct.unpack("<III", buf[4:16])
    data = buf[16:]
    if len(data) != 4 * w * h:
        raise UsageError(f"{path}: expected {4 * w * h} payload bytes, found {len(data)}")
    img = np.frombuffer(data, dtype="<f4").reshape(h, w).astype(np.float64)
    if not np.all(np.isfinite(img)) or img.min() < 0.0 or img.max() > 1.0:
        raise UsageError(f"{path}: intensities must be finite and within [0, 1]")
    return img


def write_rcmf(path, img) -> None:
    img = as_image(img)
    h, w = img.shape
    Path(path).write_bytes(RCMF_MAGIC + struct.pack("<III", w, h, 0) + img.astype("<f4").tobytes())


def load_image(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic[:2] == b"P5":
        return read_pgm(path)
    if magic == RCMF_MAGIC:
        return read_rcmf(path)
    raise UsageError(f"{path}: unrecognized image format")
