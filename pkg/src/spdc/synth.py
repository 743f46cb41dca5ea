"""Labeled synthetic SPD data and texture mosaics for desk-scale experiments."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import UsageError
from .spd import check_spd, spd_exp


@dataclass(frozen=True)
class SynthSpec:
    clusters: int = 2
    points_per_cluster: int = 20
    dim: int = 5
    center_spread: float = 1.0
    noise: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.clusters < 2 or self.points_per_cluster < 2 or self.dim < 2:
            raise UsageError("need clusters >= 2, points_per_cluster >= 2, dim >= 2")
        if not self.center_spread > 0:
            raise UsageError("center_spread must be positive")
        if self.noise < 0:
            raise UsageError("noise must be nonnegative")


def _sym_uniform(rng, d):
    U = rng.uniform(-1.0, 1.0, size=(d, d))
    return 0.5 * (U + U.T)


def generate(spec: SynthSpec):
    """Clusters drawn around random log-centers.

    Point ``i`` of cluster ``c`` is ``expm(S_c + noise * E_i)`` where ``S_c``
    and ``E_i`` are symmetrized uniform[-1, 1] matrices, ``S_c`` scaled by
    ``center_spread``.

    Returns
    -------
    data : ndarray, shape (k * m, d, d)
    labels : ndarray of int, shape (k * m,)
    """
    rng = np.random.default_rng(spec.seed)
    k, m, d = spec.clusters, spec.points_per_cluster, spec.dim
    centers = [spec.center_spread * _sym_uniform(rng, d) for _ in range(k)]
    data = np.empty((k * m, d, d))
    labels = np.repeat(np.arange(k), m)
    for i, c in enumerate(labels):
        data[i] = check_spd(spd_exp(centers[c] + spec.noise * _sym_uniform(rng, d)))
    return data, labels


def random_field(shape, sigma, rng) -> np.ndarray:
    """Gaussian-smoothed white noise, rescaled to zero mean and unit std."""
    F = ndimage.gaussian_filter(rng.standard_normal(shape), sigma, mode="wrap")
    return (F - F.mean()) / F.std()


def texture_mosaic(size: int = 256, tile: int = 32, seed: int = 0,
                   sigmas=((0.7, 3.0), (3.0, 0.7)), contrast=(0.12, 0.2)):
    """Two stationary random textures laid out as a 2x2 checkerboard of quadrants.

    Returns the image (values in [0, 1]) and one label per ``tile x tile``
    region in row-major order.
    """
    if size % (2 * tile):
        raise UsageError("size must be a multiple of 2 * tile")
    rng = np.random.default_rng(seed)
    fields = [0.5 + c * random_field((size, size), s, rng) for s, c in zip(sigmas, contrast)]
    yy, xx = np.mgrid[0:size, 0:size]
    which = ((yy >= size // 2) ^ (xx >= size // 2)).astype(int)
    img = np.clip(np.where(which == 0, fields[0], fields[1]), 0.0, 1.0)
    labels = which[::tile, ::tile].ravel()
    return img, labels
