"""Exact finite-N computations on the magnetization distribution.

The joint law of the spins depends on the configuration only through
s = sum(x_i), so every quantity of interest reduces to a sum over the
N+1 support points of s. Weights span e^(beta*N/2), far beyond linear
floating-point range, hence all sums run in log space.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import ModelParams

__all__ = [
    "CostGuardError",
    "MagnetizationPmf",
    "brute_force_correlation",
    "brute_force_scaled_moment",
    "exact_correlation",
    "exact_scaled_moment",
    "magnetization_pmf",
]

BRUTE_FORCE_MAX_N = 20


class CostGuardError(ValueError):
    """An enumeration would exceed its cost guard."""


@lru_cache(maxsize=64)
def _log_factorials(n: int) -> np.ndarray:
    # lf[k] = ln k!; built once per n, read-only so cached arrays are shareable
    lf = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, n + 1, dtype=np.float64)))))
    lf.setflags(write=False)
    return lf


def _logsumexp(a: np.ndarray) -> float:
    m = float(np.max(a))
    if not np.isfinite(m):
        return m
    return m + float(np.log(np.sum(np.exp(a - m))))


@dataclass(frozen=True)
class MagnetizationPmf:
    """Distribution of s = sum(x_i) on {-N, -N+2, ..., N}, in log space."""

    params: ModelParams
    support: np.ndarray
    log_weights: np.ndarray
    log_partition: float

    def probabilities(self) -> np.ndarray:
        return np.exp(self.log_weights - self.log_partition)


@lru_cache(maxsize=64)
def magnetization_pmf(params: ModelParams) -> MagnetizationPmf:
    """Exact law of the total magnetization under the given parameters.

    Weight of s = 2k - N is C(N, k) * e^(beta*s^2/(2N)); binomials come
    from cumulative log-factorials and the normalizer is a log-sum-exp.
    beta = 0 needs no special case, the exponential term just vanishes.
    """
    n, beta = params.n, params.beta
    lf = _log_factorials(n)
    k = np.arange(n + 1)
    support = 2 * k - n
    s = support.astype(np.float64)
    log_weights = (lf[n] - lf[k] - lf[n - k]) + beta * s * s / (2.0 * n)
    log_weights.setflags(write=False)
    support.setflags(write=False)
    return MagnetizationPmf(params, support, log_weights, _logsumexp(log_weights))


def exact_correlation(params: ModelParams, ell: int) -> float:
    """E[X_1 * ... * X_ell], exactly, in O(ell * N) operations.

    Splits the configuration sum by j = number of +1 among the first
    ell spins and k = number of +1 among the rest, so the product
    x_1*...*x_ell is (-1)^(ell-j) and the configuration count is
    C(ell, j) * C(N-ell, k). The alternating sum runs through two
    log-space accumulators, one per sign.
    """
    n, beta = params.n, params.beta
    if not 0 <= ell <= n:
        raise ValueError(f"need 0 <= ell <= n, got ell={ell}, n={n}")
    lf = _log_factorials(n)
    j = np.arange(ell + 1)
    k = np.arange(n - ell + 1)
    log_cj = lf[ell] - lf[j] - lf[ell - j]
    log_ck = lf[n - ell] - lf[k] - lf[n - ell - k]
    s = (2.0 * (j[:, None] + k[None, :]) - n).astype(np.float64)
    log_terms = log_cj[:, None] + log_ck[None, :] + beta * s * s / (2.0 * n)
    # summing the same grid without signs reproduces the partition function
    log_z = _logsumexp(log_terms)
    negative_row = (ell - j) % 2 == 1
    pos = np.exp(_logsumexp(log_terms[~negative_row]) - log_z)
    neg = np.exp(_logsumexp(log_terms[negative_row]) - log_z) if negative_row.any() else 0.0
    return float(pos - neg)


def exact_scaled_moment(params: ModelParams, big_k: int, alpha: float) -> float:
    """E[(S_N / N^alpha)^K] summed over the exact magnetization law."""
    if big_k < 0:
        raise ValueError(f"moment order must be >= 0, got {big_k}")
    pmf = magnetization_pmf(params)
    x = pmf.support.astype(np.float64) / params.n**alpha
    return float(pmf.probabilities() @ x**big_k)


def _config_weights(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    n = params.n
    if n > BRUTE_FORCE_MAX_N:
        raise CostGuardError(
            f"2^{n} configurations exceed the brute-force guard (n <= {BRUTE_FORCE_MAX_N})"
        )
    configs = ((np.arange(2**n, dtype=np.int64)[:, None] >> np.arange(n)) & 1) * 2 - 1
    s = configs.sum(axis=1).astype(np.float64)
    log_w = params.beta * s * s / (2.0 * n)
    return configs, np.exp(log_w - log_w.max())


def brute_force_correlation(params: ModelParams, ell: int) -> float:
    """Test oracle: E[X_1 * ... * X_ell] by summing all 2^N configurations."""
    if not 0 <= ell <= params.n:
        raise ValueError(f"need 0 <= ell <= n, got ell={ell}, n={params.n}")
    configs, weights = _config_weights(params)
    product = configs[:, :ell].prod(axis=1) if ell else np.ones(len(configs))
    return float((weights * product).sum() / weights.sum())


def brute_force_scaled_moment(params: ModelParams, big_k: int, alpha: float) -> float:
    """Test oracle: E[(S_N / N^alpha)^K] by summing all 2^N configurations."""
    if big_k < 0:
        raise ValueError(f"moment order must be >= 0, got {big_k}")
    configs, weights = _config_weights(params)
    x = configs.sum(axis=1).astype(np.float64) / params.n**alpha
    return float((weights * x**big_k).sum() / weights.sum())
