"""Thermal states, the two-mode squeezed vacuum probe, and phase-insensitive channels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import IndexOutOfRange, InvalidSpec, NegativeNoise, NegativeSqueezing
from .gaussian import GaussianState

#: Mode index of the channel output in :func:`probe_output`; the reference is mode 1.
OUTPUT_MODE = 0
REFERENCE_MODE = 1


@dataclass(frozen=True)
class ChannelSpec:
    """A thermal-loss or amplifier channel with excess noise ``n_b``.

    Use :meth:`thermal` or :meth:`amplifier` rather than the raw constructor.
    """

    kind: Literal["thermal", "amplifier"]
    n_b: float
    eta: float | None = None
    gain: float | None = None

    def __post_init__(self):
        if self.kind == "thermal":
            if self.eta is None or self.gain is not None:
                raise InvalidSpec("thermal channel needs eta and no gain")
            if not 0.0 <= self.eta <= 1.0:
                raise InvalidSpec(f"transmissivity {self.eta} outside [0, 1]")
        elif self.kind == "amplifier":
            if self.gain is None or self.eta is not None:
                raise InvalidSpec("amplifier channel needs gain and no eta")
            if self.gain < 1.0:
                raise InvalidSpec(f"gain {self.gain} < 1")
        else:
            raise InvalidSpec(f"unknown channel kind {self.kind!r}")
        if not self.n_b >= 0.0:
            raise NegativeNoise(f"excess noise {self.n_b} < 0")

    @classmethod
    def thermal(cls, eta: float, n_b: float) -> "ChannelSpec":
        return cls("thermal", float(n_b), eta=float(eta))

    @classmethod
    def amplifier(cls, gain: float, n_b: float) -> "ChannelSpec":
        return cls("amplifier", float(n_b), gain=float(gain))

    def with_noise(self, n_b: float) -> "ChannelSpec":
        """Same channel family (same eta or gain) with a different excess noise."""
        return ChannelSpec(self.kind, float(n_b), eta=self.eta, gain=self.gain)

    @property
    def scale(self) -> float:
        """Amplitude factor applied to the input quadratures."""
        return np.sqrt(self.eta if self.kind == "thermal" else self.gain)

    @property
    def added_noise(self) -> float:
        """Variance added to each output quadrature."""
        weight = 1.0 - self.eta if self.kind == "thermal" else self.gain - 1.0
        return weight * (self.n_b + 0.5)


@dataclass(frozen=True)
class ProbeSpec:
    n_s: float
    m: int = 1

    def __post_init__(self):
        if not self.n_s >= 0:
            raise NegativeSqueezing(f"n_s = {self.n_s} < 0")
        if self.m < 1:
            raise InvalidSpec(f"m = {self.m} < 1")


def thermal_state(n_b: float) -> GaussianState:
    """Single-mode thermal state with mean photon number ``n_b``."""
    if not n_b >= 0:
        raise NegativeNoise(f"mean photon number {n_b} < 0")
    return GaussianState((n_b + 0.5) * np.eye(2), check=False)


def tmsv(n_s: float) -> GaussianState:
    """Two-mode squeezed vacuum with ``n_s`` mean photons per arm.

    Mode 0 is the arm sent through the channel, mode 1 the kept reference.
    """
    if not n_s >= 0:
        raise NegativeSqueezing(f"mean photon number {n_s} < 0")
    v = n_s + 0.5
    c0 = np.sqrt(n_s * (n_s + 1.0))
    cov = np.array(
        [
            [v, c0, 0.0, 0.0],
            [c0, v, 0.0, 0.0],
            [0.0, 0.0, v, -c0],
            [0.0, 0.0, -c0, v],
        ]
    )
    return GaussianState(cov, check=False)


def apply_channel(state: GaussianState, mode: int, spec: ChannelSpec) -> GaussianState:
    """Send ``mode`` of ``state`` through the channel ``spec``.

    Acts as ``V -> X V X^T + Y`` with ``X = sqrt(eta) I`` (or ``sqrt(G) I``) on the
    acted mode and identity elsewhere.
    """
    n = state.n_modes
    if not 0 <= mode < n:
        raise IndexOutOfRange(f"mode {mode} outside 0..{n - 1}")
    x = np.ones(2 * n)
    x[[mode, mode + n]] = spec.scale
    cov = state.cov * np.outer(x, x)
    cov[mode, mode] += spec.added_noise
    cov[mode + n, mode + n] += spec.added_noise
    return GaussianState(cov, state.mean * x, check=False)


def probe_output(spec: ChannelSpec, n_s: float) -> GaussianState:
    """Single-use output state: channel applied to the arm of ``tmsv(n_s)``.

    For a thermal channel the covariance is ``[[a, c, 0, 0], [c, b, 0, 0],
    [0, 0, a, -c], [0, 0, -c, b]]`` with ``a = eta n_s + (1 - eta) n_b + 1/2``,
    ``b = n_s + 1/2`` and ``c = sqrt(eta n_s (n_s + 1))``.
    """
    return apply_channel(tmsv(n_s), OUTPUT_MODE, spec)
