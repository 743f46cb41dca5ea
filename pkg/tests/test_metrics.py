import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sklearn.metrics import normalized_mutual_info_score

from oracles import brute_force_accuracy
from spdc.errors import UsageError
from spdc.metrics import accuracy, contingency, nmi


def test_accuracy_examples():
    assert accuracy([0, 1, 2, 2], [0, 1, 2, 2]) == 1.0
    assert accuracy([1, 1, 0, 0], [0, 0, 1, 1]) == 1.0
    assert accuracy([0, 0, 1, 1, 1], [0, 1, 1, 0, 0]) == pytest.approx(0.6)


def test_accuracy_noncontiguous_and_unequal_counts():
    assert accuracy([5, 5, 9, 9, 9], [0, 0, 1, 1, 2]) == pytest.approx(0.8)


def test_length_mismatch():
    with pytest.raises(UsageError):
        accuracy([0, 1], [0])
    with pytest.raises(UsageError):
        nmi([0, 1], [0])


def test_contingency_counts():
    np.testing.assert_array_equal(contingency([0, 0, 1], [3, 4, 4]), [[1, 1], [0, 1]])


def test_accuracy_matches_brute_force(rng):
    for _ in range(200):
        n = int(rng.integers(1, 41))
        pred = rng.integers(0, rng.integers(1, 7), n)
        truth = rng.integers(0, rng.integers(1, 7), n)
        assert accuracy(pred, truth) == pytest.approx(brute_force_accuracy(pred, truth), abs=1e-12)


def test_accuracy_symmetric_for_square_tables(rng):
    for _ in range(100):
        pred, truth = rng.integers(0, 4, 30), rng.integers(0, 4, 30)
        if len(set(pred)) == len(set(truth)):
            assert accuracy(pred, truth) == accuracy(truth, pred)


def test_nmi_examples():
    assert nmi([0, 0, 1, 1, 2], [0, 0, 1, 1, 2]) == 1.0
    assert nmi([0, 0, 1, 1], [0, 1, 0, 1]) == 0.0
    assert nmi([0, 0, 0], [4, 4, 4]) == 1.0
    assert nmi([0, 0, 0], [0, 1, 0]) == 0.0


def test_nmi_independent_large_sample():
    r = np.random.default_rng(0)
    assert nmi(r.integers(0, 2, 10000), r.integers(0, 2, 10000)) <= 0.1


def test_nmi_matches_sklearn_geometric(rng):
    for _ in range(100):
        pred, truth = rng.integers(0, 4, 50), rng.integers(0, 3, 50)
        ref = normalized_mutual_info_score(truth, pred, average_method="geometric")
        assert nmi(pred, truth) == pytest.approx(ref, abs=1e-12)


labels = st.lists(st.integers(0, 5), min_size=1, max_size=40)


@settings(max_examples=200, deadline=None)
@given(labels, st.data())
def test_relabel_invariance_and_range(pred, data):
    truth = data.draw(st.lists(st.integers(0, 5), min_size=len(pred), max_size=len(pred)))
    pred, truth = np.array(pred), np.array(truth)
    relabel = np.random.default_rng(len(pred)).permutation(50)
    for fn in (accuracy, nmi):
        v = fn(pred, truth)
        assert 0.0 <= v <= 1.0
        assert fn(relabel[pred], truth) == pytest.approx(v, abs=1e-12)
        assert fn(pred, relabel[truth]) == pytest.approx(v, abs=1e-12)
