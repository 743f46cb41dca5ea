"""End-to-end clustering methods on SPD datasets.

``ksscr``
    Log-Euclidean Gaussian (or Stein) kernel, sparse self-expression, spectral clustering.
``kssce``
    The same solver with a Gaussian kernel on raw matrix entries.
``kmeans_log`` / ``kmeans_raw``
    k-means on vectorized matrix logs / raw matrices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import affinity, kmeans, spectral_cluster
from .errors import DegenerateInputError, UsageError
from .kernels import KernelSpec, gram, stack_dataset
from .solver import SolveReport, SolverConfig, solve
from .spd import spd_log

METHODS = ("ksscr", "kssce", "kmeans_log", "kmeans_raw")
KSSCR_KERNELS = ("log_euclidean_gaussian", "stein")


@dataclass
class MethodResult:
    labels: np.ndarray
    report: SolveReport | None = None
    affinity: np.ndarray | None = None
    gram: np.ndarray | None = None
    degenerate: bool = False

    @property
    def iters(self) -> int:
        return self.report.iters_used if self.report else 0

    @property
    def converged(self) -> bool:
        return self.report.converged if self.report else True


def check_method_kernel(method: str, kernel: KernelSpec) -> None:
    if method not in METHODS:
        raise UsageError(f"unknown method {method!r}; expected one of {METHODS}")
    if method == "ksscr" and kernel.kind not in KSSCR_KERNELS:
        raise UsageError(f"ksscr needs a kernel in {KSSCR_KERNELS}, got {kernel.kind}")
    if method == "kssce" and kernel.kind != "euclidean_gaussian":
        raise UsageError(f"kssce needs the euclidean_gaussian kernel, got {kernel.kind}")


def subspace_cluster(K, k: int, solver: SolverConfig = SolverConfig(), seed: int = 0,
                     restarts: int = 20) -> MethodResult:
    """Sparse self-expression on a Gram matrix followed by spectral clustering.

    An all-zero coefficient matrix carries no grouping; every point is then
    put in cluster 0 and the result is flagged ``degenerate``.
    """
    report = solve(K, solver)
    W = affinity(report.C)
    try:
        labels = spectral_cluster(W, k, seed=seed, restarts=restarts).labels
        degenerate = False
    except DegenerateInputError:
        labels = np.zeros(len(W), dtype=int)
        degenerate = True
    return MethodResult(labels, report, W, np.asarray(K), degenerate)


def log_vectors(data) -> np.ndarray:
    X = stack_dataset(data)
    return np.stack([spd_log(x).ravel() for x in X])


def run_method(method: str, data, k: int, kernel: KernelSpec | None = None,
               solver: SolverConfig = SolverConfig(), seed: int = 0, restarts: int = 20,
               workers: int = 1) -> MethodResult:
    if kernel is None:
        kernel = KernelSpec("euclidean_gaussian" if method == "kssce" else "log_euclidean_gaussian")
    check_method_kernel(method, kernel)
    if method in ("ksscr", "kssce"):
        K = gram(data, kernel, workers=workers)
        return subspace_cluster(K, k, solver, seed=seed, restarts=restarts)
    if method == "kmeans_log":
        points = log_vectors(data)
    else:
        points = stack_dataset(data).reshape(len(data), -1)
    return MethodResult(kmeans(points, k, seed=seed, restarts=restarts).labels)


def ksscr(data, k: int, gamma: float = 0.5, lam: float = 0.04, rho: float = 1.0,
          seed: int = 0, **solver_kw) -> MethodResult:
    """Cluster SPD matrices with the Log-Euclidean Gaussian kernel."""
    return run_method("ksscr", data, k, KernelSpec("log_euclidean_gaussian", gamma=gamma),
                      SolverConfig(lam=lam, rho=rho, **solver_kw), seed=seed)
