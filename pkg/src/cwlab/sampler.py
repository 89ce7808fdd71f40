"""Samplers for the spin ensemble and empirical moment estimation.

The exact sampler draws magnetizations from the finite-N law by
inverse-CDF lookup and, since the joint law is exchangeable, can
materialize spin vectors by placing the +1 coordinates uniformly at
random. The heat-bath chain is the Markov-chain alternative; above the
critical temperature it shows the metastable hopping between the two
magnetized branches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ModelParams
from .exact import magnetization_pmf

__all__ = [
    "SampleBatch",
    "empirical_moment",
    "glauber_chain",
    "sample_exact",
    "substream",
]


def substream(seed: int, task_index: int) -> np.random.Generator:
    """Independent counter-based generator for one task of a seed.

    Substream rule: stream i of seed s is Philox keyed by
    SeedSequence(s, spawn_key=(i,)). Identical (seed, task_index) give
    bit-identical streams on any platform.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(task_index,))))


@dataclass(frozen=True)
class SampleBatch:
    """Magnetization draws from one parameter point, reproducible by seed."""

    params: ModelParams
    seed: int
    magnetizations: np.ndarray
    spins: np.ndarray | None = None

    def __post_init__(self) -> None:
        n = self.params.n
        mags = self.magnetizations
        if mags.size:
            if int(np.abs(mags).max()) > n or (((mags + n) % 2) != 0).any():
                raise ValueError("magnetizations must lie in {-N, -N+2, ..., N}")
        mags.setflags(write=False)
        if self.spins is not None:
            if (self.spins.sum(axis=1) != mags).any():
                raise ValueError("materialized spins must reproduce their magnetizations")
            self.spins.setflags(write=False)

    @property
    def spins_materialized(self) -> bool:
        return self.spins is not None


def sample_exact(
    params: ModelParams, count: int, seed: int, materialize_spins: bool = False
) -> SampleBatch:
    """Draw count i.i.d. magnetizations from the exact finite-N law.

    Inverse-CDF over the precomputed cumulative table, one binary search
    per draw. Optionally materializes spin vectors: for a draw s, the
    (N+s)/2 coordinates set to +1 are chosen uniformly at random, which
    is the correct conditional law by exchangeability.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = substream(seed, 0)
    pmf = magnetization_pmf(params)
    cdf = np.cumsum(pmf.probabilities())
    cdf[-1] = 1.0  # guard rounding so the search never falls off the table
    indices = np.searchsorted(cdf, rng.random(count), side="right")
    magnetizations = pmf.support[indices].astype(np.int64)
    spins = None
    if materialize_spins:
        n = params.n
        spins = np.full((count, n), -1, dtype=np.int8)
        for row, s in enumerate(magnetizations):
            plus = (n + int(s)) // 2
            spins[row, rng.permutation(n)[:plus]] = 1
    return SampleBatch(params, seed, magnetizations, spins)


def glauber_chain(
    params: ModelParams, sweeps: int, seed: int, burn_in: int = 0, init: str = "random"
) -> SampleBatch:
    """Single-site heat-bath chain targeting the finite-N spin law.

    Site i is refreshed to +1 with probability (1 + tanh(beta*S_-i/N))/2
    where S_-i is the sum of the other spins; detailed balance makes the
    spin law stationary. One sweep updates all N sites in a fresh random
    permutation order; the magnetization is recorded after every
    post-burn-in sweep.
    """
    if sweeps <= burn_in:
        raise ValueError(f"need sweeps > burn_in, got sweeps={sweeps}, burn_in={burn_in}")
    if burn_in < 0:
        raise ValueError(f"burn_in must be >= 0, got {burn_in}")
    n, beta = params.n, params.beta
    rng = substream(seed, 0)
    if init == "random":
        spins = (rng.integers(0, 2, n) * 2 - 1).tolist()
    elif init == "plus":
        spins = [1] * n
    else:
        raise ValueError(f"init must be 'random' or 'plus', got {init!r}")
    total = sum(spins)
    scale = beta / n
    out = np.empty(sweeps - burn_in, dtype=np.int64)
    for sweep in range(sweeps):
        order = rng.permutation(n).tolist()
        uniforms = rng.random(n).tolist()
        for position, site in enumerate(order):
            rest = total - spins[site]
            p_plus = 0.5 * (1.0 + math.tanh(scale * rest))
            new = 1 if uniforms[position] < p_plus else -1
            total += new - spins[site]
            spins[site] = new
        if sweep >= burn_in:
            out[sweep - burn_in] = total
    return SampleBatch(params, seed, out)


def empirical_moment(batch: SampleBatch, big_k: int, alpha: float) -> tuple[float, float]:
    """Sample mean and standard error of (s/N^alpha)^K over a batch.

    The standard error assumes independent draws; for chain output it
    understates the uncertainty unless the batch is thinned or blocked.
    """
    mags = batch.magnetizations
    if mags.size == 0:
        raise ValueError("empty batch")
    values = (mags.astype(np.float64) / batch.params.n**alpha) ** big_k
    estimate = float(values.mean())
    error = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    return estimate, error
