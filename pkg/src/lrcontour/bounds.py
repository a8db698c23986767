"""Closed-form constants of the contour argument and the Peierls calculator.

The chain is: the cover-size census is bounded by e^(C2 R); the energy of
an irreducible contour dominates epsilon_lower N'(gamma); N <= c(M,a) N'
converts cover size to isolated-cover size; so the free energy dominates
C3 N(gamma) with C3 = (1-eta)/(2K), K = c(M,a)/epsilon_lower, and the
contour series converges once beta C3 > C2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .covers import ContourParams
from .energy import ModelParams, epsilon_j, tail_sum
from .enumeration import C2


def zeta(s: float) -> float:
    """Riemann zeta for s > 1, certified below 1e-12 relative error.

    The certificate is dominated by the roundoff cushion of the 127
    directly summed terms, not by the tail remainder.
    """
    if not s > 1.0:
        raise ValueError("zeta is summed only for s > 1")
    value, err = tail_sum(s, 1, base=128)
    if err > 1e-12 * value:
        raise ArithmeticError(f"zeta({s}) certificate too weak: {err}")
    return value


def cover_constant(a: float) -> float:
    """C(a) = 2^(a+3) / (2^(a-1) - 1) from the energy-estimates bound."""
    if not (1.0 < a < 2.0):
        raise ValueError("a must lie in (1, 2)")
    return 2.0 ** (a + 3.0) / (2.0 ** (a - 1.0) - 1.0)


def energy_bracket(alpha: float, params: ContourParams) -> float:
    """1 - C(a)/M - 4 alpha M^(1-alpha); may be negative at small M."""
    return (1.0 - cover_constant(params.a) / params.M
            - 4.0 * alpha * params.M ** (1.0 - alpha))


def c_of(params: ContourParams) -> float:
    """c(M,a) = 6 [2a/(a-1)]^log_a(2) zeta(log_a 2) [log2(8M)]^log_a(2)."""
    a, big_m = params.a, params.M
    lg = math.log2(8.0 * big_m)
    if 3.0 / (2.0 - a) > lg:
        raise ValueError(
            f"M too small for a: need log2(8M) >= {3.0 / (2.0 - a):g}, "
            f"got {lg:g}")
    s = math.log(2.0) / math.log(a)
    return 6.0 * (2.0 * a / (a - 1.0)) ** s * zeta(s) * lg ** s


def peierls_series(x: float) -> float:
    """Sum over R >= 1 of e^(xR) = e^x / (1 - e^x), for x < 0."""
    if x >= 0.0:
        raise ValueError("series diverges for non-negative exponent rate")
    ex = math.exp(x)
    return ex / (1.0 - ex)


@dataclass(frozen=True)
class PeierlsConstants:
    C2: float
    epsilon_lower: float
    c_Ma: float
    K: float
    C3: float
    eta: float

    def __post_init__(self) -> None:
        if min(self.C2, self.epsilon_lower, self.c_Ma, self.K, self.C3) <= 0:
            raise ValueError("Peierls constants must all be positive")
        if not 0.0 <= self.eta < 1.0:
            raise ValueError("eta must lie in [0, 1)")

    def as_payload(self) -> dict:
        return {"C2": self.C2, "epsilon_lower": self.epsilon_lower,
                "c_Ma": self.c_Ma, "K": self.K, "C3": self.C3,
                "eta": self.eta}


def peierls_constants(model_params: ModelParams, contour_params: ContourParams,
                      eta: float = 0.0) -> PeierlsConstants:
    eps = epsilon_j(model_params)
    c_ma = c_of(contour_params)
    big_k = c_ma / eps
    c3 = (1.0 - eta) / (2.0 * big_k)
    return PeierlsConstants(C2, eps, c_ma, big_k, c3, eta)


def beta_threshold(model_params: ModelParams, contour_params: ContourParams,
                   eta: float, target: float) -> float:
    """Smallest beta with peierls_series(C2 - beta C3) <= target.

    Closed form: the series is monotone in its argument, so the threshold
    solves C2 - beta C3 = log(target / (1 + target)).
    """
    if not 0.0 < target < 1.0:
        raise ValueError("target must lie in (0, 1)")
    consts = peierls_constants(model_params, contour_params, eta)
    return (consts.C2 - math.log(target / (1.0 + target))) / consts.C3
