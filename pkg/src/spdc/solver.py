"""ADMM solver for kernel sparse self-expression.

Solves::

    min_C  lam * ||C||_1 - 2 tr(K C) + tr(C K C^T)    s.t. diag(C) = 0

by splitting ``C`` with an auxiliary ``A`` (constraint ``A = C - diag(C)``)
and alternating a closed-form A-step, a soft-thresholding C-step and a dual
ascent step on the multiplier ``Delta``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import DimensionError, NumericError, UsageError
from .spd import is_symmetric


@dataclass(frozen=True)
class SolverConfig:
    lam: float = 0.04
    rho: float = 1.0
    epsilon: float = 1e-4
    max_iters: int = 500

    def __post_init__(self):
        for name in ("lam", "rho", "epsilon"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name} must be positive, got {getattr(self, name)}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise UsageError(f"max_iters must be a positive integer, got {self.max_iters}")


@dataclass
class SolverState:
    A: np.ndarray
    C: np.ndarray
    Delta: np.ndarray
    iter: int = 0
    primal_residual: float = np.inf
    step_residual: float = np.inf


@dataclass
class SolveReport:
    C: np.ndarray
    converged: bool
    iters_used: int
    objective_trace: list = field(default_factory=list)
    residual_trace: list = field(default_factory=list)
    state: SolverState | None = None
    seconds: float = 0.0

    @property
    def objective(self) -> float:
        return self.objective_trace[-1]


def _check_pair(C, K):
    C = np.asarray(C, dtype=np.float64)
    K = np.asarray(K, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1] or C.shape != K.shape:
        raise DimensionError(f"incompatible shapes C{C.shape} and K{K.shape}")
    return C, K


def objective(C, K, lam: float) -> float:
    """``lam * sum|C_ij| - 2 tr(K C) + tr(C K C^T)``.

    This is the self-expression residual in feature space minus the constant
    ``tr(K)``.
    """
    C, K = _check_pair(C, K)
    return float(lam * np.abs(C).sum() - 2.0 * np.sum(K * C.T) + np.sum((C @ K) * C))


def shrink(v, eta: float):
    """Soft-thresholding ``sign(v) * max(|v| - eta, 0)``, elementwise."""
    v = np.asarray(v, dtype=np.float64)
    out = np.sign(v) * np.maximum(np.abs(v) - eta, 0.0)
    return float(out) if out.ndim == 0 else out


def zero_diag(M: np.ndarray) -> np.ndarray:
    M = np.array(M, dtype=np.float64, copy=True)
    np.fill_diagonal(M, 0.0)
    return M


def factorize(K, rho: float):
    """Cholesky factor of ``2K + rho I``."""
    K = np.asarray(K, dtype=np.float64)
    try:
        return linalg.cho_factor(2.0 * K + rho * np.eye(len(K)), lower=False, check_finite=True)
    except (linalg.LinAlgError, ValueError) as exc:
        raise NumericError(
            f"2K + rho*I is not positive definite (indefinite Gram?): {exc}"
        ) from exc


def update_A(K, C_tilde, Delta, rho: float, factor=None) -> np.ndarray:
    """``A = (2K + rho*C_tilde - Delta) (2K + rho*I)^-1``.

    The right division is done as a left solve on the transpose, which is
    valid because ``2K + rho*I`` is symmetric.
    """
    K = np.asarray(K, dtype=np.float64)
    if factor is None:
        factor = factorize(K, rho)
    B = 2.0 * K + rho * np.asarray(C_tilde) - np.asarray(Delta)
    return linalg.cho_solve(factor, B.T).T


def update_C(A, Delta, lam: float, rho: float) -> np.ndarray:
    J = shrink(np.asarray(A) + np.asarray(Delta) / rho, lam / rho)
    return J - np.diag(np.diag(J))


def update_Delta(Delta, A, C, rho: float) -> np.ndarray:
    C = np.asarray(C)
    return np.asarray(Delta) + rho * (np.asarray(A) - C + np.diag(np.diag(C)))


def solve(K, config: SolverConfig = SolverConfig()) -> SolveReport:
    """Run ADMM from ``A = C = Delta = 0`` until both residuals drop below epsilon.

    Stops when ``max|A - C| <= epsilon`` and ``max|A_new - A_old| <= epsilon``,
    or after ``config.max_iters`` iterations with ``converged=False``.
    """
    K = np.asarray(K, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise DimensionError(f"K must be square, got {K.shape}")
    if not np.all(np.isfinite(K)):
        raise NumericError("K has non-finite entries")
    if not is_symmetric(K):
        raise UsageError("K must be symmetric")

    lam, rho, eps = config.lam, config.rho, config.epsilon
    t0 = time.perf_counter()
    factor = factorize(K, rho)
    n = len(K)
    state = SolverState(A=np.zeros((n, n)), C=np.zeros((n, n)), Delta=np.zeros((n, n)))
    objectives, residuals = [], []
    converged = False
    for t in range(1, config.max_iters + 1):
        A = update_A(K, state.C, state.Delta, rho, factor)
        C = update_C(A, state.Delta, lam, rho)
        Delta = update_Delta(state.Delta, A, C, rho)
        primal = float(np.max(np.abs(A - C)))
        step = float(np.max(np.abs(A - state.A)))
        state = SolverState(A, C, Delta, t, primal, step)
        objectives.append(objective(C, K, lam))
        residuals.append((primal, step))
        if primal <= eps and step <= eps:
            converged = True
            break
    return SolveReport(
        C=state.C,
        converged=converged,
        iters_used=state.iter,
        objective_trace=objectives,
        residual_trace=residuals,
        state=state,
        seconds=time.perf_counter() - t0,
    )
