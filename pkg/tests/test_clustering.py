import numpy as np
import pytest

from oracles import matched
from spdc.clustering import affinity, kmeans, spectral_cluster, spectral_embedding
from spdc.errors import DegenerateInputError, UsageError
from spdc.metrics import accuracy


def block_affinity(sizes, rng=None, dense=False):
    n = sum(sizes)
    W = np.zeros((n, n))
    labels = np.repeat(np.arange(len(sizes)), sizes)
    for c in range(len(sizes)):
        idx = np.flatnonzero(labels == c)
        block = rng.uniform(0.1, 1.0, (len(idx), len(idx))) if dense else np.ones((len(idx), len(idx)))
        W[np.ix_(idx, idx)] = block
    W = (W + W.T) / 2
    np.fill_diagonal(W, 0.0)
    return W, labels


class TestAffinity:
    def test_zero(self):
        np.testing.assert_array_equal(affinity(np.zeros((3, 3))), 0)

    def test_example(self):
        np.testing.assert_array_equal(affinity([[0, -2], [4, 0]]), [[0, 3], [3, 0]])

    def test_symmetric_nonnegative(self, rng):
        C = rng.standard_normal((7, 7))
        np.fill_diagonal(C, 0)
        W = affinity(C)
        np.testing.assert_array_equal(W, W.T)
        assert np.all(W >= 0) and np.all(np.diag(W) == 0)


class TestKmeans:
    def test_two_groups_1d(self):
        res = kmeans([0.0, 0.1, 10.0, 10.1], 2, seed=0)
        assert matched(res.labels, [0, 0, 1, 1])
        assert res.inertia == pytest.approx(0.01, abs=1e-12)

    def test_single_cluster(self, rng):
        X = rng.standard_normal((15, 3))
        res = kmeans(X, 1)
        assert np.all(res.labels == 0)
        assert res.inertia == pytest.approx(np.sum((X - X.mean(0)) ** 2), rel=1e-12)

    def test_k_equals_n(self, rng):
        X = rng.standard_normal((6, 2))
        res = kmeans(X, 6, seed=3)
        assert len(np.unique(res.labels)) == 6 and res.inertia == 0.0

    def test_duplicated_dataset(self, rng):
        X = np.concatenate([rng.normal(c, 0.1, (5, 2)) for c in (0, 5, 10)])
        a = kmeans(X, 3, seed=1)
        b = kmeans(np.concatenate([X, X]), 3, seed=1)
        assert matched(a.labels, b.labels[:15]) and matched(b.labels[:15], b.labels[15:])

    def test_inertia_non_increasing(self, rng):
        for s in range(20):
            X = rng.standard_normal((40, 3))
            res = kmeans(X, 4, seed=s, restarts=1)
            tr = np.array(res.inertia_trace)
            assert np.all(np.diff(tr) <= 1e-12 * tr[0])

    def test_seed_determinism(self, rng):
        X = rng.standard_normal((30, 2))
        np.testing.assert_array_equal(kmeans(X, 3, seed=7).labels, kmeans(X, 3, seed=7).labels)

    def test_k_too_large(self):
        with pytest.raises(UsageError):
            kmeans(np.zeros((3, 2)), 4)


class TestSpectral:
    def test_two_blocks(self):
        W, truth = block_affinity([3, 4])
        res = spectral_cluster(W, 2, seed=0)
        assert matched(res.labels, truth)

    def test_k_equals_n(self, rng):
        W = rng.uniform(0, 1, (5, 5))
        W = (W + W.T) / 2
        np.fill_diagonal(W, 0)
        res = spectral_cluster(W, 5)
        assert len(np.unique(res.labels)) == 5 and res.inertia == pytest.approx(0.0, abs=1e-20)

    def test_permutation_equivariance(self, rng):
        W, truth = block_affinity([5, 6, 4], rng, dense=True)
        perm = rng.permutation(len(W))
        a = spectral_cluster(W, 3, seed=2).labels
        b = spectral_cluster(W[np.ix_(perm, perm)], 3, seed=2).labels
        assert accuracy(a[perm], b) == 1.0

    def test_connected_components_recovered(self, rng):
        for _ in range(20):
            k = int(rng.integers(2, 6))
            sizes = rng.integers(2, 11, size=k)
            W, truth = block_affinity(sizes, rng, dense=True)
            assert len(W) <= 50
            assert accuracy(spectral_cluster(W, k, seed=0).labels, truth) == 1.0

    def test_scale_invariance(self, rng):
        W, truth = block_affinity([6, 6], rng, dense=True)
        W += 0.02 * rng.uniform(size=W.shape)
        W = (W + W.T) / 2
        np.fill_diagonal(W, 0)
        a = spectral_cluster(W, 2, seed=0).labels
        b = spectral_cluster(37.5 * W, 2, seed=0).labels
        assert accuracy(a, b) == 1.0

    def test_isolated_node_gets_zero_row(self):
        W, _ = block_affinity([3, 3])
        W = np.pad(W, ((0, 1), (0, 1)))
        U = spectral_embedding(W, 2)
        np.testing.assert_array_equal(U[-1], 0.0)

    def test_errors(self):
        W, _ = block_affinity([2, 2])
        with pytest.raises(UsageError):
            spectral_cluster(W, 5)
        with pytest.raises(DegenerateInputError):
            spectral_cluster(np.zeros((4, 4)), 2)
        with pytest.raises(UsageError):
            spectral_cluster(-W, 2)
