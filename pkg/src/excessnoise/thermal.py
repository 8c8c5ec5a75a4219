"""Closed-form divergences between single-mode thermal states.

Thermal states commute (both are diagonal in the number basis), so every
quantity here is a classical divergence between two geometric distributions
``p(n) = (1/(N+1)) (N/(N+1))^n``. All values are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateMeans, Divergent, DomainError
from .report import DivergenceReport


@dataclass(frozen=True)
class ThermalPair:
    """Mean photon numbers ``n1``, ``n2`` of the two thermal hypotheses."""

    n1: float
    n2: float

    def __post_init__(self):
        if not (self.n1 >= 0 and self.n2 >= 0):
            raise DomainError(f"mean photon numbers must be non-negative, got ({self.n1}, {self.n2})")

    def require_distinct(self) -> None:
        require_distinct(self.n1, self.n2)


def _unpack(pair: ThermalPair | float, n2: float | None) -> tuple[float, float]:
    if isinstance(pair, ThermalPair):
        if n2 is not None:
            raise TypeError("pass either a ThermalPair or two means, not both")
        return pair.n1, pair.n2
    if n2 is None:
        raise TypeError("second mean photon number missing")
    p = ThermalPair(float(pair), float(n2))
    return p.n1, p.n2


def g(x: float, y: float) -> float:
    """``(x+1) ln(y+1) - x ln y``, with ``0 ln 0 = 0``.

    ``g(x, x)`` is the von Neumann entropy of a thermal state with mean ``x``.
    """
    if x < 0 or y < 0:
        raise DomainError(f"g({x}, {y}) needs non-negative arguments")
    if x == 0:
        return math.log1p(y)
    if y == 0:
        raise DomainError(f"g({x}, 0) diverges")
    return (x + 1) * math.log1p(y) - x * math.log(y)


def thermal_entropy(n: float) -> float:
    return g(n, n)


def _log_ratio(n1: float, n2: float) -> float:
    # ln[(1 + 1/n1) / (1 + 1/n2)] written without the 1/n blow-up
    return math.log1p(n1) - math.log(n1) - math.log1p(n2) + math.log(n2)


def relative_entropy(n1: float, n2: float) -> float:
    if n1 == n2:
        return 0.0
    return -g(n1, n1) + g(n1, n2)


def relative_entropy_variance(n1: float, n2: float) -> float:
    if n1 < 0 or n2 < 0:
        raise DomainError("mean photon numbers must be non-negative")
    if n1 == 0 or n1 == n2:
        return 0.0
    if n2 == 0:
        raise DomainError("relative entropy variance diverges for n2 = 0 < n1")
    return n1 * (n1 + 1) * _log_ratio(n1, n2) ** 2


def fidelity(n1: float, n2: float) -> float:
    """Squared-overlap fidelity ``||sqrt(rho) sqrt(sigma)||_1^2``."""
    if n1 < 0 or n2 < 0:
        raise DomainError("mean photon numbers must be non-negative")
    return (math.sqrt((n1 + 1) * (n2 + 1)) - math.sqrt(n1 * n2)) ** -2


def thermal_divergences(pair: ThermalPair | float, n2: float | None = None) -> DivergenceReport:
    """Relative entropy, its variance and the fidelity of ``theta(n1)`` vs ``theta(n2)``.

    Accepts a :class:`ThermalPair` or the two means as separate arguments.
    """
    n1, n2 = _unpack(pair, n2)
    return DivergenceReport(
        d=relative_entropy(n1, n2),
        v=relative_entropy_variance(n1, n2),
        f=fidelity(n1, n2),
        method="closed-form",
    )


def renyi_thermal(alpha: float, pair: ThermalPair | float, n2: float | None = None) -> float:
    """Rényi relative entropy of order ``alpha`` between two thermal states.

    For commuting states the Petz and sandwiched definitions coincide, so one
    value serves both.

    Raises
    ------
    Divergent
        If the geometric series ``sum_n r^n`` does not converge, i.e. when
        ``r = (n1/(n1+1))^alpha (n2/(n2+1))^(1-alpha) >= 1``.
    """
    if alpha <= 0 or alpha == 1:
        raise DomainError(f"alpha must lie in (0, 1) U (1, inf), got {alpha}")
    n1, n2 = _unpack(pair, n2)
    if n1 == n2:
        return 0.0
    if n2 == 0 and alpha > 1:
        raise Divergent(f"D_{alpha} diverges for n2 = 0 < n1")
    if n1 == 0 or n2 == 0:
        log_r = -math.inf
    else:
        log_r = alpha * (math.log(n1) - math.log1p(n1)) + (1 - alpha) * (math.log(n2) - math.log1p(n2))
    if log_r >= 0:
        raise Divergent(f"Rényi series diverges (log r = {log_r:.3g})")
    log_sum = -alpha * math.log1p(n1) - (1 - alpha) * math.log1p(n2) - math.log1p(-math.exp(log_r))
    return log_sum / (alpha - 1)


def qfi_thermal(n_b: float) -> float:
    """Quantum Fisher information of the thermal family with respect to ``n_b``."""
    if not n_b > 0:
        raise DomainError("Fisher information of the thermal family diverges at n_b = 0")
    return 1.0 / (n_b * (n_b + 1))


def require_distinct(n1: float, n2: float) -> None:
    if n1 == n2:
        raise DegenerateMeans(f"hypotheses coincide (n1 = n2 = {n1})")


__all__ = [
    "ThermalPair",
    "g",
    "thermal_entropy",
    "relative_entropy",
    "relative_entropy_variance",
    "fidelity",
    "thermal_divergences",
    "renyi_thermal",
    "qfi_thermal",
    "require_distinct",
]
