import math

import numpy as np
import pytest

from pseudoeval import (
    GaussianSummary,
    Kernel,
    PredictionSet,
    fid,
    fid_from_summaries,
    inception_score,
    kernel_eval,
    kid,
    median_heuristic_bandwidth,
    mmd_unbiased,
)
from pseudoeval.errors import DimMismatch, SubsetTooLarge, TooFewSamples

from conftest import make_features


def mmd_double_loop(x, y, kernel):
    """O(n^2) reference implementation straight from the three-term
    unbiased estimator."""
    m, n = len(x), len(y)
    sxx = sum(
        kernel_eval(kernel, x[i], x[j]) for i in range(m) for j in range(m) if i != j
    )
    syy = sum(
        kernel_eval(kernel, y[i], y[j]) for i in range(n) for j in range(n) if i != j
    )
    sxy = sum(kernel_eval(kernel, x[i], y[j]) for i in range(m) for j in range(n))
    return sxx / (m * (m - 1)) + syy / (n * (n - 1)) - 2.0 * sxy / (m * n)


# ----------------------------------------------------------------------- fid

def test_fid_self_is_zero(rng):
    x = make_features(rng.normal(size=(64, 6)))
    assert abs(fid(x, x).value) <= 1e-6


def test_fid_closed_form_1d():
    # exact summaries: mean 0 var 1 vs mean 2 var 1 -> d_mu^2 + (s1-s2)^2 = 4
    p = GaussianSummary(mean=np.array([0.0]), cov=np.array([[1.0]]), n=2)
    q = GaussianSummary(mean=np.array([2.0]), cov=np.array([[1.0]]), n=2)
    assert fid_from_summaries(p, q) == pytest.approx(4.0, abs=1e-9)


def test_fid_closed_form_2d():
    p = GaussianSummary(mean=np.zeros(2), cov=np.eye(2), n=2)
    q = GaussianSummary(mean=np.ones(2), cov=4.0 * np.eye(2), n=2)
    # 2 + (2 + 8 - 2 * Tr(2I)) = 4
    assert fid_from_summaries(p, q) == pytest.approx(4.0, abs=1e-9)


def test_fid_symmetry(rng):
    x = make_features(rng.normal(size=(40, 5)), prefix="x")
    y = make_features(rng.normal(size=(50, 5)) + 1.0, prefix="y")
    assert abs(fid(x, y).value - fid(y, x).value) <= 1e-6


def test_fid_orientation_and_sizes(rng):
    x = make_features(rng.normal(size=(10, 3)), prefix="x")
    y = make_features(rng.normal(size=(12, 3)), prefix="y")
    score = fid(x, y)
    assert score.orientation == "lower_better"
    assert score.sample_sizes == (10, 12)


def test_fid_dim_mismatch(rng):
    with pytest.raises(DimMismatch):
        fid(
            make_features(rng.normal(size=(5, 3)), prefix="x"),
            make_features(rng.normal(size=(5, 4)), prefix="y"),
        )


# ----------------------------------------------------------------------- mmd

def test_mmd_hand_example_linear():
    x = np.array([[1.0, 0.0], [-1.0, 0.0]])
    y = np.array([[0.0, 1.0], [0.0, -1.0]])
    value = mmd_unbiased(x, y, Kernel("linear")).value
    assert value == pytest.approx(-2.0, abs=1e-12)


def test_mmd_identical_singletons_gaussian():
    row = np.array([[0.3, -0.7, 1.1]])
    x = np.repeat(row, 4, axis=0)
    value = mmd_unbiased(x, x.copy(), Kernel("gaussian", bandwidth=0.8)).value
    assert value == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize(
    "kernel",
    [
        Kernel("linear"),
        Kernel("gaussian", bandwidth=2.0),
        Kernel("polynomial", degree=3, gamma=0.25, coef0=1.0),
    ],
    ids=["linear", "gaussian", "polynomial"],
)
def test_mmd_matches_double_loop(kernel, rng):
    x = rng.normal(size=(20, 4))
    y = rng.normal(size=(24, 4)) + 0.5
    expected = mmd_double_loop(x, y, kernel)
    assert mmd_unbiased(x, y, kernel).value == pytest.approx(expected, abs=1e-10)


def test_mmd_permutation_invariant(rng):
    x = rng.normal(size=(30, 3))
    y = rng.normal(size=(30, 3))
    k = Kernel("gaussian", bandwidth=1.5)
    a = mmd_unbiased(x, y, k).value
    b = mmd_unbiased(x[rng.permutation(30)], y[rng.permutation(30)], k).value
    assert a == pytest.approx(b, abs=1e-12)


def test_mmd_grows_with_mean_shift(rng):
    x = rng.normal(size=(200, 1))
    k = Kernel("gaussian", bandwidth=1.0)
    values = [
        mmd_unbiased(x, rng.normal(size=(200, 1)) + shift, k).value
        for shift in [0.0, 0.5, 1.0, 2.0, 4.0]
    ]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_mmd_too_few_samples(rng):
    with pytest.raises(TooFewSamples):
        mmd_unbiased(rng.normal(size=(1, 2)), rng.normal(size=(5, 2)), Kernel("linear"))


# ----------------------------------------------------------------------- kid

def test_kid_degenerate_subsetting_equals_mmd(rng):
    x = rng.normal(size=(30, 5))
    y = rng.normal(size=(30, 5))
    kernel = Kernel("polynomial", degree=3, gamma=1.0 / 5, coef0=1.0)
    expected = mmd_unbiased(x, y, kernel).value
    value = kid(x, y, subset_size=30, n_subsets=1, seed=0).value
    assert value == expected


def test_kid_self_near_zero(rng):
    x = rng.normal(size=(400, 4))
    values = [
        kid(x, x, subset_size=50, n_subsets=1, seed=s).value for s in range(30)
    ]
    mean = np.mean(values)
    stderr = np.std(values, ddof=1) / math.sqrt(len(values))
    assert abs(mean) <= 3.0 * stderr + 1e-12


def test_kid_deterministic(rng):
    x = rng.normal(size=(60, 4))
    y = rng.normal(size=(60, 4)) + 0.3
    a = kid(x, y, subset_size=20, n_subsets=10, seed=7).value
    b = kid(x, y, subset_size=20, n_subsets=10, seed=7).value
    assert a == b


def test_kid_subset_too_large(rng):
    with pytest.raises(SubsetTooLarge):
        kid(rng.normal(size=(10, 2)), rng.normal(size=(10, 2)), subset_size=11)


# ----------------------------------------------------- inception score

def _preds(probs):
    probs = np.asarray(probs, dtype=float)
    ids = tuple(f"p{i}" for i in range(probs.shape[0]))
    return PredictionSet(ids=ids, probs=probs)


def test_is_uniform_rows():
    p = _preds(np.full((12, 4), 0.25))
    assert inception_score(p).value == 1.0


def test_is_one_hot_balanced_two_classes():
    probs = [[1.0, 0.0]] * 4 + [[0.0, 1.0]] * 4
    assert inception_score(_preds(probs)).value == 2.0


def test_is_one_hot_balanced_four_classes():
    probs = np.kron(np.eye(4), np.ones((2, 1)))
    assert inception_score(_preds(probs)).value == 4.0


def test_is_single_confident_row_cluster():
    # marginal equals every row -> KL = 0 -> score 1
    probs = np.tile([1.0, 0.0], (4, 1))
    assert inception_score(_preds(probs)).value == 1.0


def test_is_bounds(rng):
    raw = rng.random((50, 5))
    p = _preds(raw / raw.sum(axis=1, keepdims=True))
    for splits in (1, 2, 5):
        v = inception_score(p, n_splits=splits).value
        assert 1.0 <= v <= 5.0 + 1e-12


def test_is_orientation():
    assert inception_score(_preds(np.full((4, 2), 0.5))).orientation == "higher_better"


# ----------------------------------------------------------------- bandwidth

def test_median_heuristic_positive(rng):
    x = rng.normal(size=(100, 3))
    y = rng.normal(size=(100, 3))
    assert median_heuristic_bandwidth(x, y) > 0


def test_median_heuristic_deterministic(rng):
    x = rng.normal(size=(3000, 2))
    y = rng.normal(size=(1000, 2))
    assert median_heuristic_bandwidth(x, y, seed=4) == median_heuristic_bandwidth(
        x, y, seed=4
    )
