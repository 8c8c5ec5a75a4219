"""Gaussian-state tools for discriminating and estimating excess noise in bosonic channels."""

from .channels import ChannelSpec, ProbeSpec, apply_channel, probe_output, thermal_state, tmsv
from .divergences import divergences, fidelity, qfi_finite_difference, relative_entropy, relative_entropy_variance
from .gaussian import GaussianState, SymplecticMatrix, symplectic_eigenvalues, williamson
from .report import DivergenceReport
from .strategy import StrategySpec, bound_gap_report, exact_binary_test, monte_carlo_discrimination
from .thermal import ThermalPair, thermal_divergences

__version__ = "0.1.0"

__all__ = [
    "ChannelSpec",
    "DivergenceReport",
    "GaussianState",
    "ProbeSpec",
    "StrategySpec",
    "SymplecticMatrix",
    "apply_channel",
    "bound_gap_report",
    "divergences",
    "exact_binary_test",
    "fidelity",
    "monte_carlo_discrimination",
    "probe_output",
    "qfi_finite_difference",
    "relative_entropy",
    "relative_entropy_variance",
    "symplectic_eigenvalues",
    "thermal_divergences",
    "thermal_state",
    "ThermalPair",
    "tmsv",
    "williamson",
]
