"""Clustering accuracy (optimal label matching) and normalized mutual information."""
from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import UsageError


def _labels(pred, truth):
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.shape != truth.shape:
        raise UsageError(f"label vectors differ in length: {pred.size} vs {truth.size}")
    if pred.size == 0:
        raise UsageError("label vectors are empty")
    return pred, truth


def contingency(pred, truth) -> np.ndarray:
    """Counts ``M[a, b]`` of points with predicted id ``a`` and true id ``b``."""
    pred, truth = _labels(pred, truth)
    _, p = np.unique(pred, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    M = np.zeros((p.max() + 1, t.max() + 1), dtype=np.int64)
    np.add.at(M, (p, t), 1)
    return M


def accuracy(pred, truth) -> float:
    """Fraction of points agreeing under the best one-to-one relabeling."""
    M = contingency(pred, truth)
    rows, cols = linear_sum_assignment(M, maximize=True)
    return float(M[rows, cols].sum() / M.sum())


def _entropy(counts: np.ndarray) -> float:
    p = counts[counts > 0] / counts.sum()
    return float(-np.sum(p * np.log(p)))


def nmi(pred, truth) -> float:
    """``I(pred; truth) / sqrt(H(pred) H(truth))`` with natural logs.

    Two identical single-cluster partitions score 1.0; if exactly one side
    has zero entropy the score is 0.0.
    """
    M = contingency(pred, truth).astype(np.float64)
    hp = _entropy(M.sum(axis=1))
    ht = _entropy(M.sum(axis=0))
    if hp == 0.0 or ht == 0.0:
        return 1.0 if hp == ht else 0.0
    nz_rows = np.count_nonzero(M, axis=1)
    nz_cols = np.count_nonzero(M, axis=0)
    if np.all(nz_rows == 1) and np.all(nz_cols == 1):
        # same partition up to relabeling, so I == H exactly
        return 1.0
    n = M.sum()
    pij = M / n
    outer = np.outer(M.sum(axis=1), M.sum(axis=0)) / n**2
    nz = pij > 0
    mi = float(np.sum(pij[nz] * np.log(pij[nz] / outer[nz])))
    return float(np.clip(mi / np.sqrt(hp * ht), 0.0, 1.0))
