"""Shared numerical primitives.

Gaussian sample summaries, the symmetric PSD matrix square root,
kernel evaluations, confusion counts, average ranks, and the four
correlation measures used by the validation reports.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateInput,
    DimMismatch,
    EigenFailure,
    LabelOutOfRange,
    LengthMismatch,
    NotSymmetric,
    ZeroVariance,
)

SYM_TOL = 1e-8


def as_matrix(x):
    """Accept a FeatureMatrix or a plain array, return float64 ndarray."""
    values = getattr(x, "values", x)
    return np.asarray(values, dtype=np.float64)


@dataclass(frozen=True)
class GaussianSummary:
    mean: np.ndarray  # (d,)
    cov: np.ndarray   # (d, d), symmetric PSD up to roundoff
    n: int


def gaussian_summary(x):
    """Sample mean and unbiased (n-1) covariance, symmetrized."""
    a = as_matrix(x)
    n = a.shape[0]
    if n < 2:
        raise DegenerateInput(f"need at least 2 samples, got {n}")
    mean = a.mean(axis=0)
    centered = a - mean
    cov = centered.T @ centered / (n - 1)
    cov = 0.5 * (cov + cov.T)
    return GaussianSummary(mean=mean, cov=cov, n=n)


def sqrtm_psd(a):
    """Symmetric PSD square root via eigendecomposition; negative
    roundoff eigenvalues are clamped to zero."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max()))
    if np.abs(a - a.T).max() > SYM_TOL * scale:
        raise NotSymmetric("matrix is not symmetric within tolerance")
    try:
        w, v = np.linalg.eigh(0.5 * (a + a.T))
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigendecomposition failed: {exc}") from exc
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.T


@dataclass(frozen=True)
class Kernel:
    variant: str  # linear | gaussian | polynomial
    bandwidth: float = 1.0
    degree: int = 3
    gamma: float = 1.0
    coef0: float = 1.0

    def __post_init__(self):
        if self.variant not in ("linear", "gaussian", "polynomial"):
            raise ValueError(f"unknown kernel variant {self.variant!r}")
        if self.variant == "gaussian" and not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")
        if self.variant == "polynomial" and self.degree < 1:
            raise ValueError("degree must be >= 1")


def kernel_eval(k, x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimMismatch(f"vector shapes differ: {x.shape} vs {y.shape}")
    if k.variant == "linear":
        return float(x @ y)
    if k.variant == "gaussian":
        diff = x - y
        return float(np.exp(-(diff @ diff) / (2.0 * k.bandwidth**2)))
    return float((k.gamma * (x @ y) + k.coef0) ** k.degree)


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray  # (K, K); counts[t, p] = #{true t, predicted p}

    @property
    def k(self):
        return self.counts.shape[0]

    # binary accessors; class 1 is "positive"
    @property
    def tp(self):
        return int(self.counts[1, 1])

    @property
    def fn(self):
        return int(self.counts[1, 0])

    @property
    def fp(self):
        return int(self.counts[0, 1])

    @property
    def tn(self):
        return int(self.counts[0, 0])

    @property
    def total(self):
        return int(self.counts.sum())


def confusion(y_true, y_pred, class_count=None):
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.size == 0 or y_true.shape != y_pred.shape:
        raise LengthMismatch(
            f"label lists of lengths {y_true.size} and {y_pred.size}"
        )
    if class_count is None:
        class_count = int(max(y_true.max(), y_pred.max())) + 1
    class_count = max(class_count, 2)
    if y_true.min() < 0 or max(y_true.max(), y_pred.max()) >= class_count:
        raise LabelOutOfRange(f"labels must lie in [0, {class_count})")
    counts = np.zeros((class_count, class_count), dtype=np.int64)
    np.add.at(counts, (y_true, y_pred), 1)
    return ConfusionMatrix(counts=counts)


# ------------------------------------------------------------------- ranking

def average_ranks(values):
    """1-based ranks; tied values receive the average of their ranks."""
    v = np.asarray(values, dtype=np.float64)
    order = np.argsort(v, kind="stable")
    ranks = np.empty(v.size, dtype=np.float64)
    i = 0
    while i < v.size:
        j = i
        while j + 1 < v.size and v[order[j + 1]] == v[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


# -------------------------------------------------------------- correlations

def _check_pair(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"shapes {x.shape} and {y.shape}")
    if x.size < 3:
        raise DegenerateInput(f"need at least 3 points, got {x.size}")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise DegenerateInput("inputs must be finite")
    if np.all(x == x[0]):
        raise ZeroVariance("first argument is constant")
    if np.all(y == y[0]):
        raise ZeroVariance("second argument is constant")
    return x, y


def pearson(x, y):
    x, y = _check_pair(x, y)
    xc = x - x.mean()
    yc = y - y.mean()
    return float(xc @ yc / math.sqrt((xc @ xc) * (yc @ yc)))


def spearman(x, y):
    """Pearson correlation of average ranks."""
    x, y = _check_pair(x, y)
    return pearson(average_ranks(x), average_ranks(y))


def kendall_tau_b(x, y):
    x, y = _check_pair(x, y)
    n = x.size
    concordant = discordant = ties_x = ties_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[i] - x[j]
            dy = y[i] - y[j]
            if dx == 0 and dy == 0:
                continue
            if dx == 0:
                ties_x += 1
            elif dy == 0:
                ties_y += 1
            elif (dx > 0) == (dy > 0):
                concordant += 1
            else:
                discordant += 1
    n_pairs_x = concordant + discordant + ties_y
    n_pairs_y = concordant + discordant + ties_x
    denom = math.sqrt(float(n_pairs_x) * float(n_pairs_y))
    if denom == 0:
        raise ZeroVariance("no untied pairs")
    return (concordant - discordant) / denom


def r_squared(x, y):
    """Coefficient of determination of the least-squares fit y ~ x."""
    x, y = _check_pair(x, y)
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    sxy = float(xc @ yc)
    ss_res = syy - sxy * sxy / sxx
    return 1.0 - ss_res / syy
