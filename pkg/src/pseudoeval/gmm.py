"""Full-covariance Gaussian mixture fitted by EM.

All density work happens in log space (log-sum-exp); every M-step adds
a small regularizer to the covariance diagonals so that Inception-style
features (d comparable to or larger than n) stay decomposable.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DimMismatch, SingularCovariance, TooFewSamples
from .stats import as_matrix

_LOG_2PI = np.log(2.0 * np.pi)


@dataclass(frozen=True)
class GmmConfig:
    n_components: int
    covariance_reg: float = 1e-6
    tol: float = 1e-3
    max_iter: int = 100
    n_init: int = 1
    init: str = "kmeans"  # kmeans | random
    seed: int = 0

    def __post_init__(self):
        if self.n_components < 1:
            raise ValueError("n_components must be positive")
        if self.covariance_reg < 0 or self.tol <= 0 or self.max_iter < 1 or self.n_init < 1:
            raise ValueError("covariance_reg/tol/max_iter/n_init must be positive")
        if self.init not in ("kmeans", "random"):
            raise ValueError(f"unknown init {self.init!r}")


@dataclass(frozen=True)
class GmmFit:
    weights: np.ndarray           # (K,)
    means: np.ndarray             # (K, d)
    covariances: np.ndarray       # (K, d, d)
    responsibilities: np.ndarray  # (n, K)
    assignments: np.ndarray       # (n,)
    log_likelihood_trace: tuple = field(default_factory=tuple)
    converged: bool = False

    @property
    def n_components(self):
        return self.means.shape[0]

    @property
    def final_log_likelihood(self):
        return self.log_likelihood_trace[-1]


def _cholesky_list(covariances):
    chols = []
    for k, cov in enumerate(covariances):
        try:
            chols.append(np.linalg.cholesky(cov))
        except np.linalg.LinAlgError as exc:
            raise SingularCovariance(
                f"component {k} covariance not decomposable after regularization"
            ) from exc
    return chols


def _log_weighted_densities(x, weights, means, chols):
    n = x.shape[0]
    d = x.shape[1]
    k = means.shape[0]
    log_prob = np.empty((n, k))
    for j in range(k):
        sol = solve_triangular(chols[j], (x - means[j]).T, lower=True)
        maha = np.sum(sol * sol, axis=0)
        log_det = 2.0 * np.sum(np.log(np.diag(chols[j])))
        log_prob[:, j] = -0.5 * (d * _LOG_2PI + log_det + maha) + np.log(weights[j])
    return log_prob


def _e_step(x, weights, means, chols):
    log_prob = _log_weighted_densities(x, weights, means, chols)
    top = log_prob.max(axis=1, keepdims=True)
    lse = top[:, 0] + np.log(np.sum(np.exp(log_prob - top), axis=1))
    log_resp = log_prob - lse[:, None]
    return log_resp, float(lse.mean())


def _m_step(x, resp, reg):
    n, d = x.shape
    nk = resp.sum(axis=0) + 10.0 * np.finfo(np.float64).eps
    weights = nk / nk.sum()
    means = (resp.T @ x) / nk[:, None]
    covariances = np.empty((resp.shape[1], d, d))
    for j in range(resp.shape[1]):
        centered = x - means[j]
        cov = (centered * resp[:, j : j + 1]).T @ centered / nk[j]
        cov = 0.5 * (cov + cov.T)
        cov[np.diag_indices(d)] += reg
        covariances[j] = cov
    return weights, means, covariances


def _kmeans_init(x, k, rng, n_iter=10):
    """k-means++ seeding followed by a few Lloyd iterations; returns
    one-hot responsibilities."""
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    d2 = np.sum((x - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            centers[j] = x[rng.integers(n)]
        else:
            centers[j] = x[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((x - centers[j]) ** 2, axis=1))
    labels = None
    for _ in range(n_iter):
        dists = (
            np.sum(x * x, axis=1)[:, None]
            - 2.0 * (x @ centers.T)
            + np.sum(centers * centers, axis=1)[None, :]
        )
        labels = np.argmin(dists, axis=1)
        for j in range(k):
            mask = labels == j
            if mask.any():
                centers[j] = x[mask].mean(axis=0)
            else:
                # reseed an empty cluster with the farthest point
                centers[j] = x[np.argmax(dists.min(axis=1))]
    resp = np.zeros((n, k))
    resp[np.arange(n), labels] = 1.0
    return resp


def _single_run(x, cfg, rng):
    if cfg.init == "kmeans":
        resp = _kmeans_init(x, cfg.n_components, rng)
    else:
        resp = rng.random((x.shape[0], cfg.n_components))
        resp /= resp.sum(axis=1, keepdims=True)
    weights, means, covariances = _m_step(x, resp, cfg.covariance_reg)
    trace = []
    prev = -np.inf
    converged = False
    log_resp = None
    for _ in range(cfg.max_iter):
        chols = _cholesky_list(covariances)
        log_resp, ll = _e_step(x, weights, means, chols)
        trace.append(ll)
        if ll - prev < cfg.tol:
            converged = True
            break
        prev = ll
        weights, means, covariances = _m_step(x, np.exp(log_resp), cfg.covariance_reg)
    if not converged:
        # keep responsibilities consistent with the final parameters
        log_resp, _ = _e_step(x, weights, means, _cholesky_list(covariances))
    resp = np.exp(log_resp)
    return GmmFit(
        weights=weights,
        means=means,
        covariances=covariances,
        responsibilities=resp,
        assignments=np.argmax(resp, axis=1),
        log_likelihood_trace=tuple(trace),
        converged=converged,
    )


def fit_gmm(x, cfg):
    """EM fit; with n_init > 1 the run with the best final mean
    log-likelihood wins. Deterministic given cfg.seed."""
    a = as_matrix(x)
    if a.shape[0] <= cfg.n_components:
        raise TooFewSamples(
            f"{a.shape[0]} samples cannot support {cfg.n_components} components"
        )
    rng = np.random.default_rng(cfg.seed)
    best = None
    for _ in range(cfg.n_init):
        fit = _single_run(a, cfg, rng)
        if best is None or fit.final_log_likelihood > best.final_log_likelihood:
            best = fit
    return best


def predict_responsibilities(fit, x):
    """Posterior responsibilities of x under the fitted parameters."""
    a = as_matrix(x)
    if a.size == 0:
        return np.zeros((0, fit.n_components))
    if a.ndim != 2 or a.shape[1] != fit.means.shape[1]:
        raise DimMismatch(
            f"expected d={fit.means.shape[1]}, got shape {a.shape}"
        )
    chols = _cholesky_list(fit.covariances)
    log_resp, _ = _e_step(a, fit.weights, fit.means, chols)
    return np.exp(log_resp)
