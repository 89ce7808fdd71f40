"""Multiindex bookkeeping behind the moment computations.

A K-th moment of the spin sum expands over N^K index tuples; by
exchangeability each tuple contributes the correlation of its reduced
order (the number of indices occurring an odd number of times). The
census here classifies tuples by r, the number of indices occurring
exactly once, splits off the tuples with no index more than twice, and
assembles moments from those counts plus correlation values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .asymptotics import corr_asymptotic
from .core import LimitLaw, ModelParams, limit_moment
from .exact import CostGuardError, exact_correlation

__all__ = [
    "AssembledMoment",
    "ConvergenceReport",
    "MomentGap",
    "MultiindexCensus",
    "assemble_moment",
    "assemble_moment_detail",
    "census_brute",
    "moment_convergence_report",
    "w0_closed_form",
]

CENSUS_MAX_TUPLES = 10_000_000
_CHUNK = 1 << 18

_MODE_ALPHA = {"lln": 1.0, "clt": 0.5, "nclt": 0.75}


@dataclass(frozen=True)
class MultiindexCensus:
    """Exact tuple counts for length-K multiindices over {1..N}.

    w[r] counts tuples with exactly r once-occurring indices, w0[r] the
    subset with no index more than twice, w_plus[r] the rest.
    odd_counts[l] counts tuples whose number of odd-multiplicity indices
    is l; that is the reduced correlation order, kept so moments can be
    reassembled exactly.
    """

    big_k: int
    n: int
    w: tuple[int, ...]
    w0: tuple[int, ...]
    w_plus: tuple[int, ...]
    odd_counts: tuple[int, ...]

    def __post_init__(self) -> None:
        total = self.n**self.big_k
        if sum(self.w) != total or sum(self.odd_counts) != total:
            raise ValueError("census counts must partition all N^K tuples")
        for r in range(self.big_k + 1):
            if self.w[r] != self.w0[r] + self.w_plus[r]:
                raise ValueError(f"w[{r}] != w0[{r}] + w_plus[{r}]")


def w0_closed_form(big_k: int, n: int, r: int) -> int:
    """Tuples with r indices occurring once and the rest in disjoint pairs.

    N!/(N-(K+r)/2)! * K!/(r! * ((K-r)/2)! * 2^((K-r)/2)) when K - r is
    even and (K+r)/2 <= N, else 0. Exact integer arithmetic throughout.
    """
    if not 0 <= r <= big_k:
        raise ValueError(f"need 0 <= r <= K, got r={r}, K={big_k}")
    if (big_k - r) % 2 != 0 or (big_k + r) // 2 > n:
        return 0
    pairs = (big_k - r) // 2
    placements = math.factorial(big_k) // (math.factorial(r) * math.factorial(pairs) * 2**pairs)
    return math.perm(n, (big_k + r) // 2) * placements


def census_brute(big_k: int, n: int) -> MultiindexCensus:
    """Classify all N^K tuples by direct enumeration.

    Enumeration oracle for the closed form and the count bounds; guarded
    at N^K <= 10^7. Runs in vectorized chunks: each tuple is the base-N
    digit string of its rank.
    """
    if big_k < 1 or n < 1:
        raise ValueError(f"need K >= 1 and N >= 1, got K={big_k}, N={n}")
    total = n**big_k
    if total > CENSUS_MAX_TUPLES:
        raise CostGuardError(f"N^K = {total} exceeds the census guard ({CENSUS_MAX_TUPLES})")
    w = np.zeros(big_k + 1, dtype=np.int64)
    w0 = np.zeros(big_k + 1, dtype=np.int64)
    w_plus = np.zeros(big_k + 1, dtype=np.int64)
    odd = np.zeros(big_k + 1, dtype=np.int64)
    powers = n ** np.arange(big_k, dtype=np.int64)
    values = np.arange(n, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        ranks = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (ranks[:, None] // powers[None, :]) % n
        occurrences = (digits[:, :, None] == values[None, None, :]).sum(axis=1)
        r = (occurrences == 1).sum(axis=1)
        pair_only = occurrences.max(axis=1) <= 2
        w += np.bincount(r, minlength=big_k + 1)
        w0 += np.bincount(r[pair_only], minlength=big_k + 1)
        w_plus += np.bincount(r[~pair_only], minlength=big_k + 1)
        odd += np.bincount((occurrences % 2 == 1).sum(axis=1), minlength=big_k + 1)
    as_ints = lambda a: tuple(int(x) for x in a)
    return MultiindexCensus(big_k, n, as_ints(w), as_ints(w0), as_ints(w_plus), as_ints(odd))


@dataclass(frozen=True)
class AssembledMoment:
    """Moment reassembled from tuple counts and correlation values.

    remainder_bound caps the contribution of every tuple class dropped
    from value (zero when the assembly used exact correlations and the
    full census, where nothing is dropped).
    """

    beta: float
    n: int
    big_k: int
    alpha: float
    mode: str
    correlations: str
    value: float
    remainder_bound: float


def _corr_value(beta: float, ell: int, n: int) -> float:
    return 0.0 if ell % 2 == 1 else corr_asymptotic(beta, ell, n)


def _corr_ceiling(beta: float, r: int, big_k: int, n: int) -> float:
    # reduced orders of W(r) tuples: same parity as K, between r and K
    if big_k % 2 == 1:
        return 0.0
    start = r if r % 2 == 0 else r + 1
    orders = range(start, big_k + 1, 2)
    return max(corr_asymptotic(beta, ell, n) for ell in orders)


def assemble_moment_detail(
    beta: float,
    n: int,
    big_k: int,
    alpha: float,
    mode: str,
    correlations: str = "asymptotic",
) -> AssembledMoment:
    """Reassemble E[(S_N/N^alpha)^K] from counts times correlations.

    With correlations="asymptotic" the assembly keeps the tuple classes
    that survive the scaling (all pair-or-once classes for clt, the
    all-distinct class for lln and nclt) and reports an explicit bound
    on everything dropped, built from the count bounds K! N^((K+r)/2)
    and K! N^((K+r)/2 - 1/2). With correlations="exact" it sums the full
    census against exact finite-N correlations, which reproduces the
    exact moment identically.
    """
    if mode not in _MODE_ALPHA:
        raise ValueError(f"mode must be one of {sorted(_MODE_ALPHA)}, got {mode!r}")
    if alpha != _MODE_ALPHA[mode]:
        raise ValueError(f"mode {mode!r} requires alpha = {_MODE_ALPHA[mode]}, got {alpha}")
    if mode == "clt" and not 0.0 <= beta < 1.0:
        raise ValueError(f"clt mode requires 0 <= beta < 1, got {beta}")
    if mode == "nclt" and beta != 1.0:
        raise ValueError(f"nclt mode requires beta = 1, got {beta}")
    if mode == "lln" and not beta >= 0.0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    if correlations not in ("asymptotic", "exact"):
        raise ValueError(f"correlations must be 'asymptotic' or 'exact', got {correlations!r}")
    if big_k < 0:
        raise ValueError(f"moment order must be >= 0, got {big_k}")

    def result(value: float, bound: float) -> AssembledMoment:
        return AssembledMoment(beta, n, big_k, alpha, mode, correlations, value, bound)

    if big_k == 0:
        return result(1.0, 0.0)
    scale = float(n) ** (-alpha * big_k)

    if correlations == "exact":
        census = census_brute(big_k, n)
        params = ModelParams(beta, n)
        value = scale * sum(
            count * exact_correlation(params, ell)
            for ell, count in enumerate(census.odd_counts)
            if count
        )
        return result(value, 0.0)

    k_fact = math.factorial(big_k)
    if mode == "clt":
        value = scale * sum(
            w0_closed_form(big_k, n, r) * _corr_value(beta, r, n)
            for r in range(big_k % 2, big_k + 1, 2)
        )
        bound = scale * sum(
            k_fact * float(n) ** ((big_k + r) / 2.0 - 0.5) * _corr_ceiling(beta, r, big_k, n)
            for r in range(big_k + 1)
        )
    else:
        # only the all-distinct class survives the N^-alpha*K scaling
        value = scale * math.perm(n, big_k) * _corr_value(beta, big_k, n)
        bound = scale * sum(
            k_fact * float(n) ** ((big_k + r) / 2.0) * _corr_ceiling(beta, r, big_k, n)
            for r in range(big_k)
        )
    return result(value, bound)


def assemble_moment(
    beta: float,
    n: int,
    big_k: int,
    alpha: float,
    mode: str,
    correlations: str = "asymptotic",
) -> float:
    """Value of the reassembled moment; see assemble_moment_detail."""
    return assemble_moment_detail(beta, n, big_k, alpha, mode, correlations).value


@dataclass(frozen=True)
class MomentGap:
    """Convergence record of one moment order against its limit value."""

    k: int
    limit: float
    ns: tuple[int, ...]
    gaps: tuple[float, ...]
    decreased: bool
    passed: bool


@dataclass(frozen=True)
class ConvergenceReport:
    tolerance: float
    entries: tuple[MomentGap, ...]

    @property
    def passed(self) -> bool:
        return all(entry.passed for entry in self.entries)


def moment_convergence_report(
    moment_sequences: Mapping[int, Sequence[tuple[int, float]]],
    candidate_law: LimitLaw,
    tolerance: float,
) -> ConvergenceReport:
    """Compare finite-N moment sequences against a candidate limit law.

    moment_sequences maps a moment order k to (N, moment) pairs; each
    sequence is sorted by N. Per order the report lists the absolute
    gaps to the law's moment, whether the gap shrank from the smallest
    to the largest N, and a pass flag: final gap within tolerance,
    read relative to the limit moment when that is nonzero and as an
    absolute gap when it is zero. All four laws have moments growing
    slowly enough to be moment-determinate, so matching moments pins
    down the law; that is a property of the laws, not a runtime check.
    """
    if not moment_sequences:
        raise ValueError("at least one moment sequence is required")
    entries = []
    for k in sorted(moment_sequences):
        sequence = sorted(moment_sequences[k])
        if not sequence:
            raise ValueError(f"empty moment sequence for k = {k}")
        limit = limit_moment(candidate_law, k)
        ns = tuple(n for n, _ in sequence)
        gaps = tuple(abs(value - limit) for _, value in sequence)
        threshold = tolerance * abs(limit) if limit != 0.0 else tolerance
        entries.append(
            MomentGap(
                k=k,
                limit=limit,
                ns=ns,
                gaps=gaps,
                decreased=gaps[-1] < gaps[0],
                passed=gaps[-1] <= threshold,
            )
        )
    return ConvergenceReport(tolerance, tuple(entries))
