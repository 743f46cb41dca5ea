"""Symmetric positive definite matrices and their matrix functions.

SPD matrices are plain ``numpy`` arrays of shape ``(d, d)``. Arrays returned by
:func:`make_spd` are marked read-only so they can be shared freely.
Every matrix function goes through a symmetric eigendecomposition.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy import linalg

from .errors import DimensionError, NumericError

SYMMETRY_RTOL = 1e-12


class EigenPair(NamedTuple):
    """Eigenvalues in non-increasing order and matching column eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray


def _as_square(X, name: str = "matrix") -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] == 0:
        raise DimensionError(f"{name} must be a non-empty square matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise NumericError(f"{name} has non-finite entries")
    return X


def symmetrize(X: np.ndarray) -> np.ndarray:
    return 0.5 * (X + X.T)


def is_symmetric(X: np.ndarray, rtol: float = SYMMETRY_RTOL) -> bool:
    X = np.asarray(X)
    return bool(np.all(np.abs(X - X.T) <= rtol * np.maximum(1.0, np.abs(X))))


def default_floor(raw) -> float:
    """Scale-aware eigenvalue floor, ``1e-6 * (|trace(sym(raw))| / d + 1)``."""
    S = symmetrize(_as_square(raw))
    return 1e-6 * (abs(np.trace(S)) / S.shape[0] + 1.0)


def spd_eig(X) -> EigenPair:
    """Symmetric eigendecomposition with eigenvalues sorted largest first."""
    X = _as_square(X)
    w, V = np.linalg.eigh(X)
    return EigenPair(w[::-1].copy(), V[:, ::-1].copy())


def _freeze(X: np.ndarray) -> np.ndarray:
    X.setflags(write=False)
    return X


def _assemble(V: np.ndarray, w: np.ndarray) -> np.ndarray:
    return symmetrize((V * w) @ V.T)


def make_spd(raw, floor: float | None = None) -> np.ndarray:
    """Project ``raw`` onto the SPD cone.

    The matrix is symmetrized as ``(raw + raw.T) / 2`` and every eigenvalue
    below ``floor`` is raised to ``floor``.

    Parameters
    ----------
    raw : array_like, shape (d, d)
    floor : float, optional
        Smallest allowed eigenvalue. Defaults to :func:`default_floor`.

    Returns
    -------
    ndarray, shape (d, d)
        Read-only SPD matrix.
    """
    X = _as_square(raw, "raw")
    if floor is None:
        floor = default_floor(X)
    if not floor > 0:
        raise NumericError(f"floor must be positive, got {floor}")
    w, V = np.linalg.eigh(symmetrize(X))
    return _freeze(_assemble(V, np.maximum(w, floor)))


def check_spd(X, name: str = "X") -> np.ndarray:
    """Validate that ``X`` is symmetric (to 1e-12 relative) and positive definite."""
    X = _as_square(X, name)
    if not is_symmetric(X):
        raise NumericError(f"{name} is not symmetric")
    if np.linalg.eigvalsh(X)[0] <= 0:
        raise NumericError(f"{name} is not positive definite")
    return X


def _positive_eig(X, name: str):
    w, V = np.linalg.eigh(symmetrize(_as_square(X, name)))
    if w[0] <= 0:
        raise NumericError(f"{name} has a non-positive eigenvalue {w[0]:.3g}")
    return w, V


def spd_log(X) -> np.ndarray:
    """Principal matrix logarithm of an SPD matrix; the result is symmetric."""
    w, V = _positive_eig(X, "X")
    return _assemble(V, np.log(w))


def spd_exp(S) -> np.ndarray:
    """Matrix exponential of a symmetric matrix; the result is SPD."""
    w, V = np.linalg.eigh(symmetrize(_as_square(S, "S")))
    return _assemble(V, np.exp(w))


def spd_power(X, p: float) -> np.ndarray:
    w, V = _positive_eig(X, "X")
    return _assemble(V, w ** p)


def _same_dim(X, Y):
    X = _as_square(X, "X")
    Y = _as_square(Y, "Y")
    if X.shape != Y.shape:
        raise DimensionError(f"dimension mismatch: {X.shape} vs {Y.shape}")
    return X, Y


def geodesic_airm(X, Y) -> float:
    """Affine-invariant Riemannian distance ``||log(X^-1/2 Y X^-1/2)||_F``.

    The eigenvalues of ``X^-1/2 Y X^-1/2`` are the generalized eigenvalues of
    the pencil ``(Y, X)``, which avoids forming the inverse square root.
    """
    X, Y = _same_dim(X, Y)
    try:
        w = linalg.eigh(symmetrize(Y), symmetrize(X), eigvals_only=True)
    except linalg.LinAlgError as exc:
        raise NumericError(f"generalized eigenproblem failed: {exc}") from exc
    if w[0] <= 0:
        raise NumericError("inputs are not positive definite")
    return float(np.sqrt(np.sum(np.log(w) ** 2)))


def logdet(X) -> float:
    """Log-determinant of an SPD matrix via Cholesky."""
    try:
        L = linalg.cholesky(symmetrize(_as_square(X)), lower=True)
    except linalg.LinAlgError as exc:
        raise NumericError(f"Cholesky failed: {exc}") from exc
    return float(2.0 * np.sum(np.log(np.diag(L))))


def stein_divergence(X, Y) -> float:
    """Jensen-Bregman LogDet divergence ``log|(X+Y)/2| - log|XY| / 2``."""
    X, Y = _same_dim(X, Y)
    val = logdet(0.5 * (X + Y)) - 0.5 * (logdet(X) + logdet(Y))
    # exact value is >= 0; clip cancellation noise
    return max(val, 0.0)


def log_euclidean_distance(X, Y) -> float:
    X, Y = _same_dim(X, Y)
    return float(np.linalg.norm(spd_log(X) - spd_log(Y), "fro"))
