"""Exact and asymptotic numerics for the mean-field spin ensemble.

Exact finite-N distributions, correlations, and moments of the
fully-connected two-state spin model; the integral representation and
minimizer asymptotics of its correlations; the tuple-count bookkeeping
that assembles moments; exact and Markov-chain samplers; and a CLI
emitting convergence tables.
"""

__version__ = "0.1.0"

from .asymptotics import (
    DegenerateWeightError,
    HsIntegral,
    LaplaceProblem,
    corr_asymptotic,
    hs_correlation,
    hs_integral,
    laplace_approx,
)
from .combinatorics import (
    AssembledMoment,
    ConvergenceReport,
    MomentGap,
    MultiindexCensus,
    assemble_moment,
    assemble_moment_detail,
    census_brute,
    moment_convergence_report,
    w0_closed_form,
)
from .core import (
    CenteredNormal,
    DiracZero,
    LimitLaw,
    ModelParams,
    NoPositiveRootError,
    QuarticTilt,
    TwoPointMix,
    double_factorial,
    f_beta,
    f_beta_derivatives,
    limit_law_for,
    limit_moment,
    spontaneous_magnetization,
)
from .exact import (
    CostGuardError,
    MagnetizationPmf,
    brute_force_correlation,
    brute_force_scaled_moment,
    exact_correlation,
    exact_scaled_moment,
    magnetization_pmf,
)
from .sampler import SampleBatch, empirical_moment, glauber_chain, sample_exact, substream

__all__ = [
    "AssembledMoment",
    "CenteredNormal",
    "ConvergenceReport",
    "CostGuardError",
    "DegenerateWeightError",
    "DiracZero",
    "HsIntegral",
    "LaplaceProblem",
    "LimitLaw",
    "MagnetizationPmf",
    "ModelParams",
    "MomentGap",
    "MultiindexCensus",
    "NoPositiveRootError",
    "QuarticTilt",
    "SampleBatch",
    "TwoPointMix",
    "assemble_moment",
    "assemble_moment_detail",
    "brute_force_correlation",
    "brute_force_scaled_moment",
    "census_brute",
    "corr_asymptotic",
    "double_factorial",
    "empirical_moment",
    "exact_correlation",
    "exact_scaled_moment",
    "f_beta",
    "f_beta_derivatives",
    "glauber_chain",
    "hs_correlation",
    "hs_integral",
    "laplace_approx",
    "limit_law_for",
    "limit_moment",
    "magnetization_pmf",
    "moment_convergence_report",
    "sample_exact",
    "spontaneous_magnetization",
    "substream",
    "w0_closed_form",
]
