"""Hot pair-sum kernels for the two-sample statistics.

Each kernel exists twice: a numba @njit loop and a vectorized numpy
version. The numba path is used when numba imports cleanly; setting
PSEUDOEVAL_DISABLE_NUMBA=1 forces the numpy fallback (the benchmark
in benchmarks/bench_accel.py compares both).

Every function returns the triple
    (sum_{i != j} k(x_i, x_j), sum_{i != j} k(y_i, y_j), sum_{i,j} k(x_i, y_j))
so the caller assembles the unbiased two-sample estimator itself.
"""

import os

import numpy as np

NUMBA_DISABLED = os.environ.get("PSEUDOEVAL_DISABLE_NUMBA", "0") not in ("", "0")

try:
    if NUMBA_DISABLED:
        raise ImportError("disabled by PSEUDOEVAL_DISABLE_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


# ---------------------------------------------------------------- numpy path

def _offdiag_sum(g):
    return float(g.sum() - np.trace(g))


def pair_sums_linear_numpy(x, y):
    gxx = x @ x.T
    gyy = y @ y.T
    gxy = x @ y.T
    return _offdiag_sum(gxx), _offdiag_sum(gyy), float(gxy.sum())


def _sq_dists(a, b):
    aa = np.sum(a * a, axis=1)[:, None]
    bb = np.sum(b * b, axis=1)[None, :]
    d2 = aa + bb - 2.0 * (a @ b.T)
    np.maximum(d2, 0.0, out=d2)
    return d2


def pair_sums_gaussian_numpy(x, y, bandwidth):
    c = -0.5 / (bandwidth * bandwidth)
    gxx = np.exp(c * _sq_dists(x, x))
    gyy = np.exp(c * _sq_dists(y, y))
    gxy = np.exp(c * _sq_dists(x, y))
    return _offdiag_sum(gxx), _offdiag_sum(gyy), float(gxy.sum())


def pair_sums_polynomial_numpy(x, y, gamma, coef0, degree):
    gxx = (gamma * (x @ x.T) + coef0) ** degree
    gyy = (gamma * (y @ y.T) + coef0) ** degree
    gxy = (gamma * (x @ y.T) + coef0) ** degree
    return _offdiag_sum(gxx), _offdiag_sum(gyy), float(gxy.sum())


# ---------------------------------------------------------------- numba path

if HAS_NUMBA:

    @njit(cache=True)
    def _dot(a, b):
        s = 0.0
        for t in range(a.shape[0]):
            s += a[t] * b[t]
        return s

    @njit(cache=True)
    def _sqdist(a, b):
        s = 0.0
        for t in range(a.shape[0]):
            diff = a[t] - b[t]
            s += diff * diff
        return s

    @njit(cache=True)
    def pair_sums_linear_numba(x, y):
        m, n = x.shape[0], y.shape[0]
        sxx = 0.0
        for i in range(m):
            for j in range(m):
                if i != j:
                    sxx += _dot(x[i], x[j])
        syy = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    syy += _dot(y[i], y[j])
        sxy = 0.0
        for i in range(m):
            for j in range(n):
                sxy += _dot(x[i], y[j])
        return sxx, syy, sxy

    @njit(cache=True)
    def pair_sums_gaussian_numba(x, y, bandwidth):
        c = -0.5 / (bandwidth * bandwidth)
        m, n = x.shape[0], y.shape[0]
        sxx = 0.0
        for i in range(m):
            for j in range(m):
                if i != j:
                    sxx += np.exp(c * _sqdist(x[i], x[j]))
        syy = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    syy += np.exp(c * _sqdist(y[i], y[j]))
        sxy = 0.0
        for i in range(m):
            for j in range(n):
                sxy += np.exp(c * _sqdist(x[i], y[j]))
        return sxx, syy, sxy

    @njit(cache=True)
    def pair_sums_polynomial_numba(x, y, gamma, coef0, degree):
        m, n = x.shape[0], y.shape[0]
        sxx = 0.0
        for i in range(m):
            for j in range(m):
                if i != j:
                    sxx += (gamma * _dot(x[i], x[j]) + coef0) ** degree
        syy = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    syy += (gamma * _dot(y[i], y[j]) + coef0) ** degree
        sxy = 0.0
        for i in range(m):
            for j in range(n):
                sxy += (gamma * _dot(x[i], y[j]) + coef0) ** degree
        return sxx, syy, sxy

    pair_sums_linear = pair_sums_linear_numba
    pair_sums_gaussian = pair_sums_gaussian_numba
    pair_sums_polynomial = pair_sums_polynomial_numba
else:
    pair_sums_linear = pair_sums_linear_numpy
    pair_sums_gaussian = pair_sums_gaussian_numpy
    pair_sums_polynomial = pair_sums_polynomial_numpy
