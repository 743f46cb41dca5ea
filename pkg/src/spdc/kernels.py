"""Kernels on SPD matrices and Gram matrix assembly."""
from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, UsageError
from .spd import _same_dim, logdet, spd_log, stein_divergence, symmetrize

KINDS = ("log_euclidean_gaussian", "stein", "euclidean_gaussian")


class SteinKernelWarning(UserWarning):
    """The Stein kernel exponent is outside the range where the kernel is PD."""


def stein_beta_is_pd(beta: float, d: int) -> bool:
    """True when ``beta`` is in {1/2, 1, ..., (d-1)/2} or exceeds (d-1)/2."""
    top = (d - 1) / 2
    if beta > top:
        return True
    twice = 2 * beta
    return bool(np.isclose(twice, round(twice)) and round(twice) >= 1)


@dataclass(frozen=True)
class KernelSpec:
    kind: str = "log_euclidean_gaussian"
    gamma: float = 0.5
    beta: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown kernel kind {self.kind!r}; expected one of {KINDS}")
        if not self.gamma > 0:
            raise UsageError(f"gamma must be positive, got {self.gamma}")
        if not self.beta > 0:
            raise UsageError(f"beta must be positive, got {self.beta}")

    def pd_warning(self, d: int) -> bool:
        """Whether this spec is not guaranteed PD on ``d x d`` matrices."""
        return self.kind == "stein" and not stein_beta_is_pd(self.beta, d)


def kernel_log_euclidean_gaussian(X, Y, gamma: float) -> float:
    X, Y = _same_dim(X, Y)
    D = spd_log(X) - spd_log(Y)
    return float(np.exp(-gamma * np.sum(D * D)))


def kernel_stein(X, Y, beta: float) -> float:
    return float(np.exp(-beta * stein_divergence(X, Y)))


def kernel_euclidean_gaussian(X, Y, gamma: float) -> float:
    X, Y = _same_dim(X, Y)
    D = X - Y
    return float(np.exp(-gamma * np.sum(D * D)))


def kernel(X, Y, spec: KernelSpec) -> float:
    if spec.kind == "log_euclidean_gaussian":
        return kernel_log_euclidean_gaussian(X, Y, spec.gamma)
    if spec.kind == "stein":
        return kernel_stein(X, Y, spec.beta)
    return kernel_euclidean_gaussian(X, Y, spec.gamma)


def stack_dataset(data) -> np.ndarray:
    """Stack a sequence of ``d x d`` matrices into an ``(N, d, d)`` array."""
    try:
        arr = np.asarray(data, dtype=np.float64)
    except ValueError as exc:
        raise DimensionError("matrices do not share one dimension") from exc
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise DimensionError(f"expected N square matrices, got array of shape {arr.shape}")
    return arr


def _gaussian_rows(feats: np.ndarray, gamma: float, rows) -> list[np.ndarray]:
    out = []
    for i in rows:
        D = feats[i] - feats
        out.append(np.exp(-gamma * np.sum(D * D, axis=(1, 2))))
    return out


def _stein_rows(data: np.ndarray, ld: np.ndarray, beta: float, rows) -> list[np.ndarray]:
    n = len(data)
    out = []
    for i in rows:
        row = np.empty(n)
        for j in range(n):
            div = logdet(0.5 * (data[i] + data[j])) - 0.5 * (ld[i] + ld[j])
            row[j] = np.exp(-beta * max(div, 0.0))
        out.append(row)
    return out


def gram(data, spec: KernelSpec, workers: int = 1) -> np.ndarray:
    """Kernel Gram matrix ``K[i, j] = kappa(X_j, X_i)`` of a dataset.

    Matrix logs (or log-determinants for Stein) are computed once per point
    before the pair loop. Rows are independent, so ``workers > 1`` splits them
    over threads with bit-identical output.

    Parameters
    ----------
    data : sequence of (d, d) arrays or ndarray of shape (N, d, d)
    spec : KernelSpec
    workers : int
        Number of threads for the pair loop.

    Returns
    -------
    ndarray, shape (N, N)
    """
    X = stack_dataset(data)
    n, d = X.shape[0], X.shape[1]
    if n < 2:
        raise UsageError("a Gram matrix needs at least two points")
    if spec.pd_warning(d):
        warnings.warn(
            f"Stein kernel with beta={spec.beta} is not guaranteed PD for d={d}",
            SteinKernelWarning,
            stacklevel=2,
        )

    if spec.kind == "log_euclidean_gaussian":
        feats = np.stack([spd_log(x) for x in X])
        fn = lambda rows: _gaussian_rows(feats, spec.gamma, rows)  # noqa: E731
    elif spec.kind == "euclidean_gaussian":
        fn = lambda rows: _gaussian_rows(X, spec.gamma, rows)  # noqa: E731
    else:
        ld = np.array([logdet(x) for x in X])
        fn = lambda rows: _stein_rows(X, ld, spec.beta, rows)  # noqa: E731

    blocks = np.array_split(np.arange(n), max(1, min(workers, n)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, blocks))
    else:
        parts = [fn(b) for b in blocks]
    K = np.array([row for part in parts for row in part])
    return symmetrize(K)


def min_eigenvalue(K) -> float:
    return float(np.linalg.eigvalsh(symmetrize(np.asarray(K, dtype=np.float64)))[0])
