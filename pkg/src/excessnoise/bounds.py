"""Second-order hypothesis-testing expansion and Cramér-Rao limits."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import thermal
from .errors import DomainError

# piecewise rational approximation to the inverse normal CDF (central region and two tails)
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _rational_guess(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2 * math.log(p))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        return num / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1)
    if p > 1 - _P_LOW:
        return -_rational_guess(1 - p)
    q = p - 0.5
    r = q * q
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
    return num / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1)


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2))


def inverse_gaussian_cdf(p: float) -> float:
    """Quantile of the standard normal distribution.

    A piecewise rational approximation (relative error ~1e-9) followed by one
    Halley step against ``erfc``, giving close to machine precision.
    """
    if not 0 < p < 1:
        raise DomainError(f"p = {p} outside (0, 1)")
    if p == 0.5:
        return 0.0
    x = _rational_guess(p)
    # refine against the upper tail when p > 1/2 so small differences are not lost
    if p < 0.5:
        err = normal_cdf(x) - p
    else:
        err = (1 - p) - 0.5 * math.erfc(x / math.sqrt(2))
    u = err * math.sqrt(2 * math.pi) * math.exp(0.5 * x * x)
    return x - u / (1 + 0.5 * x * u)


def second_order_dh(m: int, d: float, v: float, epsilon: float) -> float:
    """``m d + sqrt(m v) Phi^{-1}(epsilon)``; the O(log m) remainder is dropped."""
    if m < 1:
        raise DomainError("m must be >= 1")
    if v < 0:
        raise DomainError("relative entropy variance must be non-negative")
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon = {epsilon} outside (0, 1)")
    return m * d + math.sqrt(m * v) * inverse_gaussian_cdf(epsilon)


def cramer_rao(m: int, n_b: float) -> float:
    """Smallest variance of an unbiased estimate of ``n_b`` after ``m`` channel uses."""
    if m < 1:
        raise DomainError("m must be >= 1")
    return 1.0 / (m * thermal.qfi_thermal(n_b))


@dataclass(frozen=True)
class BoundReport:
    m: int
    epsilon: float
    d: float
    v: float
    expansion: float
    cr_variance_floor: float | None = None


def bound_report(m: int, epsilon: float, n1: float, n2: float) -> BoundReport:
    """Environment-side limits for discriminating excess noise ``n1`` from ``n2``.

    The Cramér-Rao floor is evaluated at ``n1`` and left as ``None`` when
    ``n1 = 0``.
    """
    d = thermal.relative_entropy(n1, n2)
    v = thermal.relative_entropy_variance(n1, n2)
    floor = cramer_rao(m, n1) if n1 > 0 else None
    return BoundReport(m, epsilon, d, v, second_order_dh(m, d, v, epsilon), floor)
