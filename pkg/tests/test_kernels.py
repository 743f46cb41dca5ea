import warnings

import numpy as np
import pytest

from oracles import gaussian_gram_on_vectors, random_log_dataset, random_spd
from spdc.errors import DimensionError, UsageError
from spdc.kernels import (
    KernelSpec,
    SteinKernelWarning,
    gram,
    kernel,
    kernel_euclidean_gaussian,
    kernel_log_euclidean_gaussian,
    kernel_stein,
    min_eigenvalue,
    stein_beta_is_pd,
)


def test_log_euclidean_examples(rng):
    X = random_spd(rng, 3)
    assert kernel_log_euclidean_gaussian(X, X, 0.7) == 1.0
    assert kernel_log_euclidean_gaussian(np.diag([np.e, 1.0]), np.eye(2), 0.5) == pytest.approx(np.exp(-0.5), abs=1e-14)


def test_log_euclidean_equals_gaussian_on_log_vectors(rng):
    mats, logs = random_log_dataset(rng, 2, 4)
    expected = np.exp(-0.3 * np.sum((logs[0] - logs[1]).ravel() ** 2))
    assert kernel_log_euclidean_gaussian(mats[0], mats[1], 0.3) == pytest.approx(expected, rel=1e-10)


def test_stein_examples():
    X = np.diag([2.0, 5.0])
    assert kernel_stein(X, X, 3.0) == 1.0
    assert kernel_stein(np.eye(2), 3 * np.eye(2), 1.0) == pytest.approx(0.75, abs=1e-12)
    assert kernel_stein(np.diag([1.0, 4.0]), np.diag([4.0, 1.0]), 2.0) == pytest.approx(1.25 ** -4, abs=1e-12)


def test_euclidean_examples(rng):
    X = random_spd(rng, 3)
    assert kernel_euclidean_gaussian(X, X, 2.0) == 1.0
    assert kernel_euclidean_gaussian(np.eye(2), 2 * np.eye(2), 1.0) == pytest.approx(np.exp(-2.0), abs=1e-15)
    A, B = np.diag([np.e, 1.0]), np.eye(2)
    assert kernel_euclidean_gaussian(A, B, 0.5) != pytest.approx(kernel_log_euclidean_gaussian(A, B, 0.5))


def test_pairwise_dimension_mismatch():
    for fn in (kernel_log_euclidean_gaussian, kernel_euclidean_gaussian, kernel_stein):
        with pytest.raises(DimensionError):
            fn(np.eye(2), np.eye(3), 1.0)


def test_spec_validation():
    with pytest.raises(UsageError):
        KernelSpec("polynomial")
    with pytest.raises(UsageError):
        KernelSpec(gamma=0.0)
    with pytest.raises(UsageError):
        KernelSpec("stein", beta=-1.0)


@pytest.mark.parametrize("beta,d,ok", [
    (0.5, 5, True), (1.0, 5, True), (2.0, 5, True), (2.5, 5, True),
    (0.7, 5, False), (1.25, 5, False), (2.01, 5, True), (0.3, 2, False), (0.6, 2, True),
])
def test_stein_beta_condition(beta, d, ok):
    assert stein_beta_is_pd(beta, d) is ok


def test_stein_gram_warns_on_bad_beta(rng):
    data = [random_spd(rng, 5) for _ in range(3)]
    with pytest.warns(SteinKernelWarning):
        gram(data, KernelSpec("stein", beta=0.7))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        gram(data, KernelSpec("stein", beta=1.0))


@pytest.mark.parametrize("kind", ["log_euclidean_gaussian", "euclidean_gaussian", "stein"])
def test_gram_identical_points_all_ones(kind, rng):
    X = random_spd(rng, 3)
    K = gram([X] * 5, KernelSpec(kind, gamma=0.8, beta=1.0))
    np.testing.assert_array_equal(K, np.ones((5, 5)))


@pytest.mark.parametrize("kind", ["log_euclidean_gaussian", "euclidean_gaussian", "stein"])
def test_gram_matches_pairwise_ops(kind, rng):
    data = [random_spd(rng, 4, 0.5) for _ in range(7)]
    spec = KernelSpec(kind, gamma=0.2, beta=1.5)
    K = gram(data, spec)
    for i in range(7):
        for j in range(7):
            assert abs(K[i, j] - kernel(data[j], data[i], spec)) <= 1e-12


def test_gram_two_points(rng):
    X, Y = random_spd(rng, 3), random_spd(rng, 3)
    k = kernel_log_euclidean_gaussian(X, Y, 0.4)
    np.testing.assert_allclose(gram([X, Y], KernelSpec(gamma=0.4)), [[1, k], [k, 1]], atol=1e-15)


def test_gram_equals_vector_oracle(rng):
    mats, logs = random_log_dataset(rng, 12, 3)
    K = gram(mats, KernelSpec(gamma=0.6))
    ref = gaussian_gram_on_vectors(logs.reshape(12, -1), 0.6)
    np.testing.assert_allclose(K, ref, atol=1e-10, rtol=0)


def test_gram_invariants(rng):
    data = [random_spd(rng, 3) for _ in range(10)]
    K = gram(data, KernelSpec(gamma=0.5))
    np.testing.assert_array_equal(K, K.T)
    np.testing.assert_array_equal(np.diag(K), 1.0)
    assert min_eigenvalue(K) >= -1e-8 * 10


def test_gram_monotone_in_gamma(rng):
    data = [random_spd(rng, 3) for _ in range(6)]
    K1 = gram(data, KernelSpec(gamma=0.1))
    K2 = gram(data, KernelSpec(gamma=0.2))
    off = ~np.eye(6, dtype=bool)
    assert np.all(K2[off] < K1[off])


@pytest.mark.parametrize("kind", ["log_euclidean_gaussian", "stein"])
def test_parallel_gram_bit_identical(kind, rng):
    data = [random_spd(rng, 4) for _ in range(13)]
    spec = KernelSpec(kind, gamma=0.3, beta=2.0)
    np.testing.assert_array_equal(gram(data, spec, workers=1), gram(data, spec, workers=4))


def test_gram_needs_two_points(rng):
    with pytest.raises(UsageError):
        gram([random_spd(rng, 2)], KernelSpec())
    with pytest.raises(DimensionError):
        gram([np.eye(2), np.eye(3)], KernelSpec())
