"""Result container shared by the Gaussian, closed-form and Fock-space evaluators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal

Method = Literal["gaussian", "closed-form", "fock-oracle"]
LogBase = Literal["nats", "bits"]

_LN2 = math.log(2.0)


def convert_entropic(value: float, src: LogBase, dst: LogBase, power: int = 1) -> float:
    """Change the log base of an entropic quantity of degree ``power``.

    Relative entropies have ``power=1``, relative entropy variances ``power=2``.
    """
    if src == dst:
        return value
    factor = _LN2**power
    return value / factor if dst == "bits" else value * factor


@dataclass(frozen=True)
class DivergenceReport:
    """Distinguishability of two states.

    ``d`` is the relative entropy, ``v`` the relative entropy variance and
    ``f`` the squared-overlap fidelity. ``renyi`` maps an order ``alpha`` to the
    pair ``(petz, sandwiched)``.
    """

    d: float
    v: float
    f: float
    method: Method
    log_base: LogBase = "nats"
    renyi: dict[float, tuple[float, float]] = field(default_factory=dict)
    trace_distance: float | None = None

    def to(self, log_base: LogBase) -> "DivergenceReport":
        src = self.log_base
        return replace(
            self,
            d=convert_entropic(self.d, src, log_base),
            v=convert_entropic(self.v, src, log_base, power=2),
            renyi={
                a: (convert_entropic(p, src, log_base), convert_entropic(s, src, log_base))
                for a, (p, s) in self.renyi.items()
            },
            log_base=log_base,
        )
