"""
Truncated number-basis reference implementation.

Everything here is computed independently of the covariance-matrix code:
states are built from their number-basis expansions, channels from their
unitary dilation (a beamsplitter or two-mode squeezer acting on the input and
a thermal environment mode), and divergences from eigendecompositions.
Multi-mode density matrices use ``np.kron`` ordering, mode 0 most significant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from .channels import ChannelSpec, probe_output
from .errors import CutoffTooSmall, DimensionMismatch, DomainError, MomentMismatch, SupportViolation
from .report import DivergenceReport

SPECTRAL_FLOOR = 1e-14


@dataclass(frozen=True)
class TruncationConfig:
    """Photon-number cutoff ``n_max`` per mode and the largest admissible tail mass."""

    n_max: int
    tail_tol: float = 1e-6

    def __post_init__(self):
        if self.n_max < 1:
            raise DomainError("n_max must be >= 1")
        if not 0 < self.tail_tol <= 1e-3:
            raise DomainError("tail_tol must lie in (0, 1e-3]")

    @property
    def dim(self) -> int:
        return self.n_max + 1


@dataclass(frozen=True)
class FockDensityMatrix:
    n_modes: int
    n_max: int
    dm: np.ndarray
    tail_mass: float

    @classmethod
    def from_matrix(cls, dm: np.ndarray, n_modes: int, n_max: int) -> "FockDensityMatrix":
        dm = 0.5 * (dm + dm.conj().T)
        if np.iscomplexobj(dm) and not np.any(dm.imag):
            dm = dm.real
        if dm.shape != ((n_max + 1) ** n_modes,) * 2:
            raise DimensionMismatch(f"matrix of shape {dm.shape} for {n_modes} modes at n_max={n_max}")
        return cls(n_modes, n_max, dm, float(max(1.0 - np.trace(dm).real, 0.0)))

    def normalized(self) -> np.ndarray:
        return self.dm / np.trace(self.dm).real


def _geometric_ratio(mean: float) -> float:
    return mean / (mean + 1.0)


def geometric_tail(mean: float, n_max: int) -> float:
    """Mass of a Bose-Einstein distribution beyond ``n_max``."""
    return _geometric_ratio(mean) ** (n_max + 1)


def choose_cutoff(means: Iterable[float], tail_tol: float = 1e-6) -> TruncationConfig:
    """Smallest cutoff whose geometric tails stay below ``tail_tol``, then doubled."""
    worst = max(means)
    if worst <= 0:
        n = 1
    else:
        n = max(1, math.ceil(math.log(tail_tol) / math.log(_geometric_ratio(worst))) - 1)
    return TruncationConfig(2 * n, tail_tol)


def _check_tail(mean: float, cfg: TruncationConfig, what: str) -> float:
    tail = geometric_tail(mean, cfg.n_max)
    if tail > cfg.tail_tol:
        raise CutoffTooSmall(f"{what}: tail mass {tail:.2e} exceeds {cfg.tail_tol:.1e} at n_max={cfg.n_max}")
    return tail


def thermal_populations(n_b: float, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1)
    if n_b == 0:
        return (n == 0).astype(float)
    return np.exp(n * (math.log(n_b) - math.log1p(n_b)) - math.log1p(n_b))


def tmsv_amplitudes(n_s: float, n_max: int) -> np.ndarray:
    """Coefficients ``c_n`` of ``sum_n c_n |n>|n>``."""
    return np.sqrt(thermal_populations(n_s, n_max))


def build_state(kind: Literal["thermal", "tmsv"], mean: float, cfg: TruncationConfig) -> FockDensityMatrix:
    """Thermal state or two-mode squeezed vacuum in the truncated number basis.

    Raises
    ------
    CutoffTooSmall
        If the truncated tail mass exceeds ``cfg.tail_tol``.
    """
    if mean < 0:
        raise DomainError("mean photon number must be non-negative")
    _check_tail(mean, cfg, kind)
    if kind == "thermal":
        return FockDensityMatrix.from_matrix(np.diag(thermal_populations(mean, cfg.n_max)), 1, cfg.n_max)
    if kind == "tmsv":
        d = cfg.dim
        ket = np.zeros(d * d)
        ket[np.arange(d) * (d + 1)] = tmsv_amplitudes(mean, cfg.n_max)
        return FockDensityMatrix.from_matrix(np.outer(ket, ket), 2, cfg.n_max)
    raise DomainError(f"unknown state kind {kind!r}")


def destroy(dim: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, dim)), 1, format="csr")


def _dilation_unitary(spec: ChannelSpec, dim: int) -> np.ndarray:
    a = destroy(dim)
    eye = sp.identity(dim, format="csr")
    a_in = sp.kron(a, eye, format="csr")
    e_in = sp.kron(eye, a, format="csr")
    if spec.kind == "thermal":
        angle = math.acos(math.sqrt(spec.eta))
        gen = angle * (a_in.T @ e_in - a_in @ e_in.T)
    else:
        # two-mode squeezer with cosh r = sqrt(G); the environment enters conjugated
        r = math.acosh(math.sqrt(spec.gain))
        gen = r * (a_in.T @ e_in.T - a_in @ e_in)
    return la.expm(gen.toarray())


def dilation_output(
    spec: ChannelSpec,
    n_s: float,
    cfg: TruncationConfig | None = None,
    moment_tol: float | None = 1e-6,
) -> FockDensityMatrix:
    """Two-mode output of the channel acting on one arm of ``tmsv(n_s)``.

    The environment mode is prepared in ``theta(n_b)`` and coupled to the arm by
    the channel's dilation unitary, built as the matrix exponential of the
    truncated generator; the environment is then traced out. The result is
    ordered (channel output, reference), matching :func:`channels.probe_output`.

    Raises
    ------
    MomentMismatch
        If the output covariance differs from the Gaussian prediction by more
        than ``moment_tol`` (pass ``None`` to skip the check).
    """
    if cfg is None:
        out_mean = spec.scale**2 * n_s + spec.added_noise
        cfg = choose_cutoff([n_s, spec.n_b, out_mean])
    d = cfg.dim
    _check_tail(n_s, cfg, "probe")
    _check_tail(spec.n_b, cfg, "environment")
    unitary = _dilation_unitary(spec, d).reshape(d, d, d, d)  # [a, e, a', e']
    amps = tmsv_amplitudes(n_s, cfg.n_max)
    env = thermal_populations(spec.n_b, cfg.n_max)
    rho = np.zeros((d * d, d * d), dtype=unitary.dtype)
    for k, p_k in enumerate(env):
        if p_k < 1e-18:
            continue
        # output amplitudes phi[b, r, e] for reference photon number r
        phi = unitary[:, :, :, k].transpose(0, 2, 1) * amps[None, :, None]
        mat = phi.reshape(d * d, d)
        rho += p_k * (mat @ mat.conj().T)
    out = FockDensityMatrix.from_matrix(rho, 2, cfg.n_max)
    if moment_tol is not None:
        residual = np.abs(moments_covariance(out) - probe_output(spec, n_s).cov).max()
        if residual > moment_tol:
            raise MomentMismatch(f"covariance residual {residual:.2e} exceeds {moment_tol:.1e}")
    return out


def _quadratures(n_modes: int, dim: int) -> list[sp.csr_matrix]:
    a = destroy(dim)
    x = (a + a.T) / math.sqrt(2)
    p = (a - a.T) / (1j * math.sqrt(2))
    eye = sp.identity(dim, format="csr")

    def embed(op, j):
        out = None
        for k in range(n_modes):
            f = op if k == j else eye
            out = f if out is None else sp.kron(out, f, format="csr")
        return out

    xs = [embed(x, j) for j in range(n_modes)]
    ps = [embed(p, j) for j in range(n_modes)]
    return xs + ps


def moments_covariance(state: FockDensityMatrix) -> np.ndarray:
    """Symmetrized quadrature covariance in xxpp ordering, vacuum = I/2.

    Moments are taken with respect to the trace-normalized truncated state.
    """
    rho = state.normalized()
    ops = _quadratures(state.n_modes, state.n_max + 1)
    rho_ops = [(op.T @ rho.T).T for op in ops]  # rho @ op
    mean = np.array([np.trace(r).real for r in rho_ops])
    k = len(ops)
    cov = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            # Tr(rho r_i r_j) = sum((rho r_i) * r_j^T)
            val = ops[j].T.multiply(rho_ops[i]).sum().real
            cov[i, j] = val
    for i in range(k):
        for j in range(i):
            cov[i, j] = cov[j, i]
    # cov[i, j] currently holds Re Tr(rho r_i r_j) for i <= j, which equals the
    # symmetrized moment because the commutator [r_i, r_j] is imaginary
    return cov - np.outer(mean, mean)


def _eig_support(mat: np.ndarray, floor: float):
    w, u = np.linalg.eigh(mat)
    keep = w > floor
    return w, u, keep


def _power(w, u, keep, power):
    wk = w[keep]
    return (u[:, keep] * wk**power) @ u[:, keep].conj().T


def _log(w, u, keep):
    return (u[:, keep] * np.log(w[keep])) @ u[:, keep].conj().T


def spectral_divergences(
    rho: FockDensityMatrix | np.ndarray,
    sigma: FockDensityMatrix | np.ndarray,
    alphas: Sequence[float] = (),
    floor: float = SPECTRAL_FLOOR,
    support_tol: float = 1e-9,
) -> DivergenceReport:
    """Divergences of two density matrices from their eigendecompositions.

    Both inputs are renormalized to unit trace. Eigenvalues of ``sigma`` below
    ``floor`` are treated as outside its support; ``rho`` may put at most
    ``support_tol`` of its weight there.
    """
    r = rho.normalized() if isinstance(rho, FockDensityMatrix) else rho / np.trace(rho).real
    s = sigma.normalized() if isinstance(sigma, FockDensityMatrix) else sigma / np.trace(sigma).real
    if r.shape != s.shape:
        raise DimensionMismatch(f"{r.shape} vs {s.shape}")
    lam, u, keep_r = _eig_support(r, floor)
    mu, w, keep_s = _eig_support(s, floor)
    outside = w[:, ~keep_s]
    leak = float(np.sum(outside.conj() * (r @ outside)).real) if outside.size else 0.0
    if leak > support_tol:
        raise SupportViolation(f"rho has weight {leak:.2e} outside the support of sigma")

    log_diff = _log(lam, u, keep_r) - _log(mu, w, keep_s)
    r_log = r @ log_diff
    d = float(np.trace(r_log).real)
    v = float(np.sum(r_log * log_diff.T).real - d**2)

    sqrt_r = _power(lam, u, keep_r, 0.5)
    sqrt_s = _power(mu, w, keep_s, 0.5)
    f = float(la.svdvals(sqrt_r @ sqrt_s).sum() ** 2)

    renyi = {}
    for alpha in alphas:
        if alpha <= 0 or alpha == 1:
            raise DomainError(f"alpha must lie in (0, 1) U (1, inf), got {alpha}")
        petz = np.trace(_power(lam, u, keep_r, alpha) @ _power(mu, w, keep_s, 1 - alpha)).real
        gamma = (1 - alpha) / (2 * alpha)
        sv = la.svdvals(sqrt_r @ _power(mu, w, keep_s, gamma))
        sandwiched = np.sum(sv ** (2 * alpha))
        renyi[float(alpha)] = (float(np.log(petz) / (alpha - 1)), float(np.log(sandwiched) / (alpha - 1)))

    trace_distance = float(0.5 * np.abs(np.linalg.eigvalsh(r - s)).sum())
    return DivergenceReport(
        d=d,
        v=max(v, 0.0),
        f=min(f, 1.0),
        method="fock-oracle",
        renyi=renyi,
        trace_distance=trace_distance,
    )


def partial_trace(state: FockDensityMatrix, keep: Sequence[int]) -> FockDensityMatrix:
    """Reduced density matrix on the modes in ``keep`` (kept in ascending order)."""
    n, d = state.n_modes, state.n_max + 1
    keep = sorted(keep)
    traced = [j for j in range(n) if j not in keep]
    t = state.dm.reshape((d,) * (2 * n))
    for j in sorted(traced, reverse=True):
        cur = t.ndim // 2
        t = np.trace(t, axis1=j, axis2=j + cur)
    k = len(keep)
    return FockDensityMatrix(k, state.n_max, t.reshape(d**k, d**k), state.tail_mass)


def dephase(state: FockDensityMatrix) -> FockDensityMatrix:
    """Complete dephasing in the number basis (keeps only the diagonal)."""
    return FockDensityMatrix(state.n_modes, state.n_max, np.diag(np.diag(state.dm)), state.tail_mass)
