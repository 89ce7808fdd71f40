"""Integral representation of the correlations and their large-N limits.

The correlation E[X_1*...*X_ell] equals a ratio of one-dimensional
integrals with exponent N * f_beta; this module evaluates that ratio by
stabilized adaptive quadrature, provides the general minimizer-driven
approximation of such integrals, and the closed-form limits it yields
in the three temperature regimes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy import integrate

from .core import (
    ModelParams,
    QuarticTilt,
    double_factorial,
    f_beta,
    limit_moment,
    spontaneous_magnetization,
)

__all__ = [
    "DegenerateWeightError",
    "HsIntegral",
    "LaplaceProblem",
    "corr_asymptotic",
    "hs_correlation",
    "hs_integral",
    "laplace_approx",
]

_QUARTIC = QuarticTilt()


class DegenerateWeightError(ValueError):
    """The slowly varying factor vanishes at the minimizer."""


@dataclass(frozen=True)
class LaplaceProblem:
    """Descriptor of an integrand e^(-N*f(t)) * (t-t0)^ell * phi(t).

    f must have its unique global minimum at t0, with the first
    non-vanishing derivative there of even order m_order and value
    fm_at_t0 > 0. phi must be bounded, continuous at t0, and nonzero
    there on the approximation path.
    """

    f: Callable[[float], float]
    t0: float
    m_order: int
    fm_at_t0: float
    phi: Callable[[float], float]

    def __post_init__(self) -> None:
        if self.m_order < 2 or self.m_order % 2 != 0:
            raise ValueError(f"m_order must be a positive even integer, got {self.m_order}")
        if not self.fm_at_t0 > 0.0:
            raise ValueError(f"fm_at_t0 must be positive, got {self.fm_at_t0}")


@dataclass(frozen=True)
class HsIntegral:
    """Stabilized value of integral e^(-N*f_beta(t)) * tanh(t)^ell dt.

    log_value is the log of the integral (-inf for odd ell, where the
    integrand is odd); shift is the subtracted min of N*f_beta, kept so
    callers can reconstruct the raw integrand scale.
    """

    params: ModelParams
    ell: int
    log_value: float
    shift: float


def _exponent_minimum(beta: float) -> tuple[float, float]:
    # for beta <= 1 the exponent is minimized at 0 with value 0; above 1
    # the minima sit at +-t0 with t0/beta solving x = tanh(beta*x)
    if beta > 1.0:
        t0 = beta * spontaneous_magnetization(beta)
        return t0, f_beta(beta, t0)
    return 0.0, 0.0


def hs_integral(params: ModelParams, ell: int) -> HsIntegral:
    """Evaluate one integral of the representation by adaptive quadrature.

    The domain is truncated at T where the quadratic lower bound
    t^2/(2*beta) - |t| on the exponent guarantees the discarded tail is
    below e^-45 of the peak; the integrand is exponentiated only after
    subtracting the minimum of N * f_beta so it stays in range for any N.
    """
    beta, n = params.beta, params.n
    if beta <= 0.0:
        raise ValueError(f"the integral representation needs beta > 0, got {beta}")
    if not 0 <= ell <= n:
        raise ValueError(f"need 0 <= ell <= n, got ell={ell}, n={n}")
    t0, f_min = _exponent_minimum(beta)
    shift = n * f_min
    if ell % 2 == 1:
        return HsIntegral(params, ell, float("-inf"), shift)
    c = f_min + 45.0 / n
    trunc = max(beta + math.sqrt(beta * beta + 2.0 * beta * c) + 1.0, 3.0)
    peaks = [-t0, 0.0, t0] if t0 else [0.0]

    def integrand(t: float) -> float:
        return math.exp(-(n * f_beta(beta, t) - shift)) * math.tanh(t) ** ell

    value, _ = integrate.quad(
        integrand, -trunc, trunc, points=peaks, limit=300, epsabs=1e-13, epsrel=1e-12
    )
    return HsIntegral(params, ell, math.log(value) - shift, shift)


def hs_correlation(params: ModelParams, ell: int) -> float:
    """E[X_1 * ... * X_ell] as the ratio of two representation integrals.

    The identity is exact at every finite N, so any discrepancy against
    the exact module is pure quadrature error. Odd ell gives 0 outright
    (odd integrand).
    """
    if params.beta <= 0.0:
        raise ValueError(f"the integral representation needs beta > 0, got {params.beta}")
    if not 0 <= ell <= params.n:
        raise ValueError(f"need 0 <= ell <= n, got ell={ell}, n={params.n}")
    if ell % 2 == 1:
        return 0.0
    numerator = hs_integral(params, ell)
    denominator = hs_integral(params, 0)
    return math.exp(numerator.log_value - denominator.log_value)


def universal_integral(m_order: int, ell: int) -> float:
    """Closed form of integral e^(-t^m/m!) * t^ell dt over the real line.

    Zero for odd ell; for even ell a substitution reduces it to a gamma
    value: (2/m) * (m!)^((ell+1)/m) * Gamma((ell+1)/m).
    """
    if m_order < 2 or m_order % 2 != 0:
        raise ValueError(f"m_order must be a positive even integer, got {m_order}")
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    if ell % 2 == 1:
        return 0.0
    power = (ell + 1) / m_order
    return 2.0 / m_order * math.factorial(m_order) ** power * math.gamma(power)


def laplace_approx(problem: LaplaceProblem, n_scale: float, ell: int) -> float:
    """Leading-order value of integral e^(-N*f) * (t-t0)^ell * phi(t) dt.

    Equals (1/(N*fm))^((ell+1)/m) * phi(t0) * universal_integral(m, ell).
    The monomial factor is centered at the minimizer.
    """
    if n_scale <= 0.0:
        raise ValueError(f"n_scale must be positive, got {n_scale}")
    weight = problem.phi(problem.t0)
    if weight == 0.0:
        raise DegenerateWeightError("phi vanishes at the minimizer; the leading term is 0/0")
    scale = (1.0 / (n_scale * problem.fm_at_t0)) ** ((ell + 1) / problem.m_order)
    return scale * weight * universal_integral(problem.m_order, ell)


def corr_asymptotic(beta: float, ell: int, n: int) -> float:
    """Large-N value of E[X_1 * ... * X_ell] for even ell.

    beta < 1: (ell-1)!! * (beta/(1-beta))^(ell/2) * N^(-ell/2);
    beta = 1: N^(-ell/4) times the quartic-law moment of order ell;
    beta > 1: m(beta)^ell. Odd ell is rejected, the zero value is the
    caller's to handle.
    """
    if ell % 2 == 1:
        raise ValueError(f"corr_asymptotic is defined for even ell, got {ell}")
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    if not beta >= 0.0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if beta < 1.0:
        ratio = beta / (1.0 - beta)
        return double_factorial(ell - 1) * ratio ** (ell // 2) * float(n) ** (-ell / 2.0)
    if beta == 1.0:
        return float(n) ** (-ell / 4.0) * limit_moment(_QUARTIC, ell)
    return spontaneous_magnetization(beta) ** ell
