"""Affinity construction, k-means, and normalized spectral clustering."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import DegenerateInputError, DimensionError, UsageError
from .spd import is_symmetric


@dataclass
class ClusteringResult:
    labels: np.ndarray
    k: int
    inertia: float
    empty_cluster: bool = False
    inertia_trace: list = field(default_factory=list)
    affinity: np.ndarray | None = None


def affinity(C) -> np.ndarray:
    """``W = (|C| + |C|^T) / 2``."""
    C = np.asarray(C, dtype=np.float64)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise DimensionError(f"C must be square, got {C.shape}")
    A = np.abs(C)
    return 0.5 * (A + A.T)


def _sq_dists(points, centers):
    D = points[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", D, D)


def _kmeanspp(points, k, rng):
    n = len(points)
    centers = [points[rng.integers(n)]]
    d2 = _sq_dists(points, np.array(centers))[:, 0]
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centers.append(points[idx])
        d2 = np.minimum(d2, _sq_dists(points, points[idx : idx + 1])[:, 0])
    return np.array(centers)


def _lloyd(points, k, rng, max_iter, tol):
    centers = _kmeanspp(points, k, rng)
    trace = []
    emptied = False
    for _ in range(max_iter):
        d2 = _sq_dists(points, centers)
        labels = np.argmin(d2, axis=1)
        mind = d2[np.arange(len(points)), labels]
        trace.append(float(mind.sum()))
        new = centers.copy()
        for c in range(k):
            members = labels == c
            if members.any():
                new[c] = points[members].mean(axis=0)
            else:
                emptied = True
                far = int(np.argmax(mind))
                new[c] = points[far]
                mind[far] = 0.0
        shift = float(np.max(np.sqrt(np.sum((new - centers) ** 2, axis=1))))
        centers = new
        if shift < tol:
            break
    d2 = _sq_dists(points, centers)
    labels = np.argmin(d2, axis=1)
    inertia = float(d2[np.arange(len(points)), labels].sum())
    trace.append(inertia)
    return labels, inertia, trace, emptied


def kmeans(points, k: int, seed: int = 0, restarts: int = 20,
           max_iter: int = 300, tol: float = 1e-9) -> ClusteringResult:
    """k-means with k-means++ seeding and Lloyd iterations.

    The best of ``restarts`` runs by inertia is kept; ties go to the lowest
    restart index. Restart seeds are spawned from ``seed``.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    n = len(points)
    if not 1 <= k <= n:
        raise UsageError(f"need 1 <= k <= N, got k={k}, N={n}")
    if restarts < 1:
        raise UsageError("restarts must be >= 1")

    best = None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        labels, inertia, trace, emptied = _lloyd(points, k, np.random.default_rng(child), max_iter, tol)
        if best is None or inertia < best.inertia:
            best = ClusteringResult(labels, k, inertia, emptied, trace)
    best.empty_cluster = len(np.unique(best.labels)) < k
    return best


def spectral_embedding(W, k: int) -> np.ndarray:
    """Row-normalized eigenvectors of the k smallest eigenvalues of
    ``I - D^-1/2 W D^-1/2``. Zero-degree nodes get zero rows."""
    deg = W.sum(axis=1)
    inv_sqrt = np.zeros_like(deg)
    inv_sqrt[deg > 0] = 1.0 / np.sqrt(deg[deg > 0])
    L = np.eye(len(W)) - inv_sqrt[:, None] * W * inv_sqrt[None, :]
    L = 0.5 * (L + L.T)
    _, U = linalg.eigh(L, subset_by_index=[0, k - 1])
    norms = np.linalg.norm(U, axis=1)
    keep = norms > 1e-12 * max(norms.max(), 1e-300)
    U[keep] /= norms[keep, None]
    U[~keep] = 0.0
    return U


def spectral_cluster(W, k: int, seed: int = 0, restarts: int = 20) -> ClusteringResult:
    W = np.asarray(W, dtype=np.float64)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise DimensionError(f"W must be square, got {W.shape}")
    n = len(W)
    if not 1 <= k <= n:
        raise UsageError(f"need 1 <= k <= N, got k={k}, N={n}")
    if np.any(W < 0) or not is_symmetric(W):
        raise UsageError("W must be symmetric and nonnegative")
    if not np.any(W > 0):
        raise DegenerateInputError("affinity matrix is identically zero")
    result = kmeans(spectral_embedding(W, k), k, seed=seed, restarts=restarts)
    result.affinity = W
    return result
