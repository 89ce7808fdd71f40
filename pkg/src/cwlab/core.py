"""Scalar building blocks of the mean-field spin analysis.

Model parameters, the exponent function of the integral representation
together with its derivatives, the spontaneous-magnetization fixed
point, and the four limit laws of the scaled spin sum with their
moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "CenteredNormal",
    "DiracZero",
    "LimitLaw",
    "ModelParams",
    "NoPositiveRootError",
    "QuarticTilt",
    "TwoPointMix",
    "double_factorial",
    "f_beta",
    "f_beta_derivatives",
    "limit_law_for",
    "limit_moment",
    "spontaneous_magnetization",
]

_LN2 = math.log(2.0)


class NoPositiveRootError(ValueError):
    """x = tanh(beta*x) has no positive root (raised for beta <= 1)."""


@dataclass(frozen=True)
class ModelParams:
    """Inverse temperature and number of spins identifying one ensemble."""

    beta: float
    n: int

    def __post_init__(self) -> None:
        if not self.beta >= 0.0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")


def _log_cosh(t: float) -> float:
    # |t| - ln 2 + log1p(e^{-2|t|}) stays finite where cosh(t) overflows
    at = abs(t)
    return at - _LN2 + math.log1p(math.exp(-2.0 * at))


def _sech(t: float) -> float:
    # 2 e^{-|t|} / (1 + e^{-2|t|}), safe for |t| far beyond cosh's range
    e = math.exp(-abs(t))
    return 2.0 * e / (1.0 + e * e)


def f_beta(beta: float, t: float) -> float:
    """Exponent t^2/(2*beta) - ln cosh(t) of the integral representation.

    Requires beta > 0; the beta = 0 ensemble is a product measure and is
    handled exactly elsewhere, the integral representation does not
    cover it.
    """
    if beta <= 0.0:
        raise ValueError(f"f_beta needs beta > 0, got {beta}")
    return t * t / (2.0 * beta) - _log_cosh(t)


def f_beta_derivatives(beta: float, t: float, order: int) -> float:
    """Derivative of f_beta in t, for order 1 through 4.

    Closed forms: t/beta - tanh t, 1/beta - sech^2 t, 2 sech^2 t tanh t,
    and 2 sech^2 t (sech^2 t - 2 tanh^2 t).
    """
    if beta <= 0.0:
        raise ValueError(f"f_beta_derivatives needs beta > 0, got {beta}")
    if order not in (1, 2, 3, 4):
        raise ValueError(f"order must be in 1..4, got {order}")
    th = math.tanh(t)
    s2 = _sech(t) ** 2
    if order == 1:
        return t / beta - th
    if order == 2:
        return 1.0 / beta - s2
    if order == 3:
        return 2.0 * s2 * th
    return 2.0 * s2 * (s2 - 2.0 * th * th)


def spontaneous_magnetization(beta: float) -> float:
    """Unique positive solution m of m = tanh(beta*m).

    Exists only for beta > 1. Bisection on (1e-12, 1] brings the
    bracket down to rounding width, Newton steps then push the
    fixed-point residual to machine level (|m - tanh(beta*m)| <= 1e-14).
    Deterministic for a given beta.
    """
    if not beta > 1.0:
        raise NoPositiveRootError(
            f"m = tanh(beta*m) has only the root 0 for beta = {beta}; need beta > 1"
        )

    def g(x: float) -> float:
        return x - math.tanh(beta * x)

    lo, hi = 1e-12, 1.0
    if g(hi) == 0.0:
        # tanh(beta) rounds to 1 once beta is large; 1.0 is then the root
        return hi
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    m = 0.5 * (lo + hi)
    for _ in range(4):
        t = math.tanh(beta * m)
        deriv = 1.0 - beta * (1.0 - t * t)
        if deriv == 0.0:
            break
        m -= (m - t) / deriv
    return m


def double_factorial(k: int) -> int:
    """k!! with the empty-product convention (-1)!! = 0!! = 1."""
    if k < -1:
        raise ValueError(f"double factorial undefined for {k}")
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


@dataclass(frozen=True)
class DiracZero:
    """Point mass at zero."""

    def moment(self, k: int) -> float:
        return 1.0 if k == 0 else 0.0


@dataclass(frozen=True)
class TwoPointMix:
    """Even mixture of point masses at -m and +m, with m in (0, 1)."""

    m: float

    def __post_init__(self) -> None:
        if not 0.0 < self.m < 1.0:
            raise ValueError(f"two-point location must lie in (0, 1), got {self.m}")

    def moment(self, k: int) -> float:
        return self.m**k if k % 2 == 0 else 0.0


@dataclass(frozen=True)
class CenteredNormal:
    """Normal law with mean zero and the given variance."""

    variance: float

    def __post_init__(self) -> None:
        if not self.variance > 0.0:
            raise ValueError(f"variance must be positive, got {self.variance}")

    def moment(self, k: int) -> float:
        if k % 2 == 1:
            return 0.0
        return double_factorial(k - 1) * self.variance ** (k // 2)


def _quartic_normalizer() -> float:
    # closed form of the full-line integral of e^{-t^4/12}
    return 12.0**0.25 * math.gamma(0.25) / 2.0


@dataclass(frozen=True)
class QuarticTilt:
    """Law with Lebesgue density e^{-x^4/12} / normalizer."""

    normalizer: float = field(default_factory=_quartic_normalizer)

    def __post_init__(self) -> None:
        if not self.normalizer > 0.0:
            raise ValueError(f"normalizer must be positive, got {self.normalizer}")

    def moment(self, k: int) -> float:
        if k % 2 == 1:
            return 0.0
        # platform gamma; relative error well below 1e-12 on (0, 10]
        return 12.0 ** (k / 4.0) * math.gamma((k + 1) / 4.0) / math.gamma(0.25)


LimitLaw = DiracZero | TwoPointMix | CenteredNormal | QuarticTilt


def limit_moment(law: LimitLaw, k: int) -> float:
    """k-th moment of a limit law; finite for every k >= 0, 1 at k = 0."""
    if k < 0:
        raise ValueError(f"moment order must be >= 0, got {k}")
    return law.moment(k)


def limit_law_for(beta: float, alpha: float) -> LimitLaw:
    """Limit law of sum(X_i)/N^alpha for the supported scaling exponents.

    alpha = 1 gives the point mass at zero for beta <= 1 and the
    symmetric two-point mixture for beta > 1; alpha = 1/2 (beta < 1)
    gives the centered normal with variance 1/(1-beta); alpha = 3/4
    (beta = 1 only) gives the quartic law.
    """
    if alpha == 1.0:
        if beta <= 1.0:
            return DiracZero()
        return TwoPointMix(spontaneous_magnetization(beta))
    if alpha == 0.5:
        if beta >= 1.0:
            raise ValueError(f"the sqrt(N) scaling has a limit law only for beta < 1, got {beta}")
        return CenteredNormal(1.0 / (1.0 - beta))
    if alpha == 0.75:
        if beta != 1.0:
            raise ValueError(f"the N^(3/4) scaling applies only at beta = 1, got {beta}")
        return QuarticTilt()
    raise ValueError(f"no limit law for scaling exponent alpha = {alpha}")
