import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lofkm.data import Dataset
from lofkm.neighbors import knn, local_outlier_factor, lof, lof_weights, lrd, weights_from_lof
from oracles import knn_bruteforce, lof_naive

LINE = Dataset(np.arange(5, dtype=float).reshape(-1, 1))


def test_knn_ordered_line():
    nb = knn(Dataset(np.arange(4, dtype=float).reshape(-1, 1)), 0, 2)
    assert list(nb.indices) == [1, 2]
    assert nb.k_distance == 2.0


def test_knn_includes_ties():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [5.0, 5.0]])
    nb = knn(Dataset(pts), 0, 1)
    assert sorted(nb.indices) == [1, 2]
    assert len(nb) == 2


def test_knn_matches_bruteforce(rng):
    pts = rng.uniform(size=(50, 2))
    for i in range(50):
        nb = knn(Dataset(pts), i, 5)
        kd, expected = knn_bruteforce(pts, i, 5)
        assert sorted(nb.indices) == sorted(expected)
        assert math.isclose(nb.k_distance, kd, rel_tol=1e-12)
        assert i not in nb.indices
        assert np.all(nb.distances <= nb.k_distance)


def test_knn_rejects_large_k():
    with pytest.raises(ValueError):
        knn(LINE, 0, 5)
    with pytest.raises(ValueError):
        local_outlier_factor(LINE, 0)


def test_lrd_interior_of_line():
    # x=2 with k=2: neighbors x=1, x=3 with k-distance 1 each, so both
    # reach-dists are max(1, 1) = 1 and lrd = 2 / 2
    expected, _ = lof_naive(LINE.points, 2)
    assert expected[2] == 1.0
    assert lrd(LINE, 2, 2) == 1.0
    # x=1 reaches x=0 at max(k-distance(0)=2, 1) = 2 and x=2 at 1
    assert math.isclose(lrd(LINE, 1, 2), 2.0 / 3.0)
    assert math.isclose(lof(LINE, 2, 2), 2.0 / 3.0)


def test_all_identical_points():
    ds = Dataset(np.ones((6, 2)))
    res = local_outlier_factor(ds, 3)
    assert np.all(np.isinf(res.lrd))
    np.testing.assert_array_equal(res.lof, 1.0)
    np.testing.assert_array_equal(lof_weights(ds, 3), 1.0)


def test_duplicate_cluster_conventions():
    # three copies at the origin and one point at distance 1:
    # the copies have infinite density, the lone point does not
    pts = np.array([[0.0], [0.0], [0.0], [1.0]])
    res = local_outlier_factor(Dataset(pts), 2)
    assert np.all(np.isinf(res.lrd[:3]))
    np.testing.assert_array_equal(res.lof[:3], 1.0)
    assert math.isinf(res.lof[3])
    w = weights_from_lof(res.lof)
    assert np.all(np.isfinite(w)) and np.all(w >= 1.0)


def test_only_self_infinite_gives_zero():
    ratios_lof = local_outlier_factor(Dataset(np.array([[0.0], [0.0], [5.0], [9.0]])), 1).lof
    _, naive = lof_naive(np.array([[0.0], [0.0], [5.0], [9.0]]), 1)
    np.testing.assert_allclose(ratios_lof, naive)


def test_grid_interior_near_one():
    g = np.array([(x, y) for x in range(10) for y in range(10)], dtype=float)
    scores = local_outlier_factor(Dataset(g), 4).lof
    interior = [i for i, (x, y) in enumerate(g) if 2 <= x <= 7 and 2 <= y <= 7]
    assert np.all(np.abs(scores[interior] - 1.0) <= 0.05)


def test_isolated_point_is_outlier(rng):
    pts = np.vstack([rng.normal(scale=0.1, size=(20, 2)), [[5.0, 5.0]]])
    assert lof(Dataset(pts), 20, 3) > 1.5


def test_matches_naive_reference(rng):
    pts = rng.normal(size=(200, 3))
    res = local_outlier_factor(Dataset(pts), 5)
    naive_lrd, naive_lof = lof_naive(pts, 5)
    np.testing.assert_allclose(res.lrd, naive_lrd, rtol=0, atol=1e-9)
    np.testing.assert_allclose(res.lof, naive_lof, rtol=0, atol=1e-9)


@pytest.mark.parametrize("score,weight", [(0.8, 1.0), (1.0, 1.0), (2.5, 2.5)])
def test_weight_clamp(score, weight):
    assert weights_from_lof(np.array([score]))[0] == weight


@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
@settings(max_examples=30, deadline=None)
def test_weights_at_least_one(seed, k):
    pts = np.random.default_rng(seed).normal(size=(25, 2))
    assert np.all(lof_weights(Dataset(pts), k) >= 1.0)


@given(st.integers(0, 2**32 - 1), st.floats(0.1, 100.0))
@settings(max_examples=30, deadline=None)
def test_lof_similarity_invariant(seed, scale):
    r = np.random.default_rng(seed)
    pts = r.normal(size=(30, 3))
    shift = r.normal(size=3) * 10
    a = local_outlier_factor(Dataset(pts), 4).lof
    b = local_outlier_factor(Dataset(pts * scale + shift), 4).lof
    np.testing.assert_allclose(a, b, rtol=1e-6)
