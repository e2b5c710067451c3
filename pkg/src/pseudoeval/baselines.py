"""Comparison metrics: FID, unbiased MMD, KID, and Inception Score.

These operate on extracted feature matrices / prediction sets only;
no image-space computation happens here.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import accel
from .errors import DegenerateInput, DimMismatch, EmptyInput, SubsetTooLarge, TooFewSamples
from .stats import GaussianSummary, Kernel, as_matrix, gaussian_summary, sqrtm_psd

LOWER_BETTER = "lower_better"
HIGHER_BETTER = "higher_better"


@dataclass(frozen=True)
class BaselineScore:
    metric: str  # fid | kid | mmd_linear | mmd_gaussian | is
    value: float
    orientation: str
    sample_sizes: tuple


def fid_from_summaries(p, q):
    """Frechet distance between two Gaussian summaries, using the
    symmetric form sqrt(S_P C_Q S_P) of the cross-covariance term."""
    if p.mean.shape != q.mean.shape:
        raise DimMismatch(f"dims differ: {p.mean.shape} vs {q.mean.shape}")
    diff = p.mean - q.mean
    s_p = sqrtm_psd(p.cov)
    cross = sqrtm_psd(s_p @ q.cov @ s_p)
    value = float(
        diff @ diff + np.trace(p.cov) + np.trace(q.cov) - 2.0 * np.trace(cross)
    )
    if -1e-6 <= value < 0.0:
        value = 0.0
    return value


def fid(real, fake):
    a, b = as_matrix(real), as_matrix(fake)
    if a.shape[1] != b.shape[1]:
        raise DimMismatch(f"feature dims differ: {a.shape[1]} vs {b.shape[1]}")
    if a.shape[0] < 2 or b.shape[0] < 2:
        raise DegenerateInput("FID needs at least 2 samples per side")
    value = fid_from_summaries(gaussian_summary(a), gaussian_summary(b))
    return BaselineScore("fid", value, LOWER_BETTER, (a.shape[0], b.shape[0]))


def _pair_sums(x, y, k):
    if k.variant == "linear":
        return accel.pair_sums_linear(x, y)
    if k.variant == "gaussian":
        return accel.pair_sums_gaussian(x, y, k.bandwidth)
    return accel.pair_sums_polynomial(x, y, k.gamma, k.coef0, k.degree)


def mmd_unbiased(x, y, kernel, metric_name=None):
    """Three-term unbiased squared-MMD estimator; may be negative."""
    a, b = as_matrix(x), as_matrix(y)
    if a.shape[1] != b.shape[1]:
        raise DimMismatch(f"feature dims differ: {a.shape[1]} vs {b.shape[1]}")
    m, n = a.shape[0], b.shape[0]
    if m < 2 or n < 2:
        raise TooFewSamples("unbiased MMD needs at least 2 samples per side")
    sxx, syy, sxy = _pair_sums(np.ascontiguousarray(a), np.ascontiguousarray(b), kernel)
    value = sxx / (m * (m - 1)) + syy / (n * (n - 1)) - 2.0 * sxy / (m * n)
    name = metric_name or f"mmd_{kernel.variant}"
    return BaselineScore(name, float(value), LOWER_BETTER, (m, n))


def median_heuristic_bandwidth(x, y, seed=0, max_points=2000):
    """Median pairwise distance over the pooled sample; subsampled for
    cost on large inputs."""
    pooled = np.vstack([as_matrix(x), as_matrix(y)])
    if pooled.shape[0] > max_points:
        rng = np.random.default_rng(seed)
        pooled = pooled[rng.choice(pooled.shape[0], max_points, replace=False)]
    d2 = (
        np.sum(pooled**2, axis=1)[:, None]
        + np.sum(pooled**2, axis=1)[None, :]
        - 2.0 * (pooled @ pooled.T)
    )
    iu = np.triu_indices(pooled.shape[0], k=1)
    med = float(np.median(np.sqrt(np.maximum(d2[iu], 0.0))))
    return med if med > 0 else 1.0


def kid(real, fake, subset_size=None, n_subsets=100, seed=0):
    """Mean polynomial-kernel unbiased MMD over seeded random subsets
    (degree 3, gamma = 1/d, coef0 = 1)."""
    a, b = as_matrix(real), as_matrix(fake)
    if a.shape[1] != b.shape[1]:
        raise DimMismatch(f"feature dims differ: {a.shape[1]} vs {b.shape[1]}")
    m, n = a.shape[0], b.shape[0]
    if subset_size is None:
        subset_size = min(m, n, 1000)
    if subset_size > min(m, n):
        raise SubsetTooLarge(
            f"subset_size {subset_size} exceeds min sample count {min(m, n)}"
        )
    if subset_size < 2:
        raise TooFewSamples("KID subsets need at least 2 samples")
    kernel = Kernel("polynomial", degree=3, gamma=1.0 / a.shape[1], coef0=1.0)
    rng = np.random.default_rng(seed)
    values = []
    for _ in range(n_subsets):
        # sorted so a full-size subset reduces to the plain estimator
        ia = np.sort(rng.choice(m, subset_size, replace=False))
        ib = np.sort(rng.choice(n, subset_size, replace=False))
        values.append(mmd_unbiased(a[ia], b[ib], kernel).value)
    return BaselineScore("kid", float(np.mean(values)), LOWER_BETTER, (m, n))


def inception_score(preds, n_splits=1):
    """exp of the mean KL divergence between per-sample class
    distributions and the split marginal, averaged over splits."""
    probs = preds.probs
    n = probs.shape[0]
    if n == 0:
        raise EmptyInput("no prediction rows")
    if n_splits < 1:
        raise ValueError("n_splits must be >= 1")
    n_splits = min(n_splits, n)
    bounds = np.linspace(0, n, n_splits + 1, dtype=int)
    scores = []
    for lo, hi in zip(bounds, bounds[1:]):
        part = probs[lo:hi]
        marginal = part.mean(axis=0)
        ratio = np.ones_like(part)
        nz = part > 0
        ratio[nz] = part[nz] / np.broadcast_to(marginal, part.shape)[nz]
        kl = np.sum(part * np.log(ratio), axis=1)
        scores.append(math.exp(float(kl.mean())))
    return BaselineScore(
        "is", float(np.mean(scores)), HIGHER_BETTER, (n, n)
    )
