"""
Symplectic linear algebra on zero-mean Gaussian covariance matrices.

Conventions used throughout the package:

* quadratures are ordered ``(x_1, ..., x_n, p_1, ..., p_n)`` ("xxpp");
* hbar = 1 with ``x = (a + a^dag)/sqrt(2)``, so the vacuum covariance is ``I/2``;
* the symplectic form is ``Omega = [[0, I], [-I, 0]]``.

The conversion to the interleaved ``(x_1, p_1, x_2, p_2, ...)`` ordering lives
in :func:`xxpp_to_xpxp` and is used only inside :func:`williamson`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as la

from .errors import (
    DimensionMismatch,
    IllConditionedWarning,
    IndexOutOfRange,
    InvalidState,
    NonPositiveDefinite,
)

#: Symplectic eigenvalues within this distance of 1/2 are treated as pure modes.
PURE_TOL = 1e-10

_SYM_RTOL = 1e-12
_PHYS_TOL = 1e-10


def symplectic_form(n_modes: int) -> np.ndarray:
    """Return the 2n x 2n standard symplectic form in xxpp ordering."""
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [-eye, zero]])


def xxpp_to_xpxp(n_modes: int) -> np.ndarray:
    """Index permutation taking xxpp-ordered vectors to interleaved ordering.

    ``v_xpxp = v_xxpp[perm]``.
    """
    perm = np.empty(2 * n_modes, dtype=int)
    perm[0::2] = np.arange(n_modes)
    perm[1::2] = np.arange(n_modes, 2 * n_modes)
    return perm


def _check_square_even(cov: np.ndarray) -> int:
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
        raise DimensionMismatch(f"expected a square even-dimensional matrix, got {cov.shape}")
    return cov.shape[0] // 2


def _symmetry_defect(cov: np.ndarray) -> float:
    scale = max(np.abs(cov).max(), 1e-300)
    return float(np.abs(cov - cov.T).max() / scale)


def _sqrt_and_invsqrt(cov: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    w, u = np.linalg.eigh(cov)
    if w[0] <= 0:
        raise NonPositiveDefinite(f"covariance has eigenvalue {w[0]:.3e} <= 0")
    if w[-1] / w[0] > 1e12:
        warnings.warn(
            f"covariance condition number {w[-1] / w[0]:.2e} exceeds 1e12",
            IllConditionedWarning,
            stacklevel=3,
        )
    sw = np.sqrt(w)
    return w, (u * sw) @ u.T, (u / sw) @ u.T


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of ``cov``, sorted in descending order.

    They are the positive eigenvalues of the Hermitian matrix
    ``i V^{1/2} Omega V^{1/2}``, which has the same spectrum as ``i Omega V``
    but is far better conditioned at high squeezing.
    """
    cov = np.asarray(cov, dtype=float)
    n = _check_square_even(cov)
    _, vh, _ = _sqrt_and_invsqrt(0.5 * (cov + cov.T))
    herm = 1j * vh @ symplectic_form(n) @ vh
    ev = np.linalg.eigvalsh(0.5 * (herm + herm.conj().T))
    return ev[n:][::-1].copy()


@dataclass(frozen=True)
class SymplecticMatrix:
    """A real 2n x 2n matrix preserving the symplectic form."""

    mat: np.ndarray
    check: bool = field(default=True, repr=False, compare=False)
    n_modes: int = field(init=False)

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=float)
        n = _check_square_even(mat)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "n_modes", n)
        if not self.check:
            return
        defect = self.defect()
        # entries grow like sqrt(squeezing); scale the check accordingly
        if defect > 1e-10 * max(1.0, np.abs(mat).max() ** 2):
            raise ValueError(f"matrix is not symplectic (defect {defect:.2e})")

    def defect(self) -> float:
        """``max |S Omega S^T - Omega|``."""
        om = symplectic_form(self.n_modes)
        return float(np.abs(self.mat @ om @ self.mat.T - om).max())

    @classmethod
    def identity(cls, n_modes: int) -> "SymplecticMatrix":
        return cls(np.eye(2 * n_modes))

    def inverse(self) -> "SymplecticMatrix":
        om = symplectic_form(self.n_modes)
        return SymplecticMatrix(-om @ self.mat.T @ om)

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        return SymplecticMatrix(self.mat @ other.mat)


@dataclass(frozen=True)
class GaussianState:
    """Zero-mean Gaussian state described by its covariance matrix.

    Parameters
    ----------
    cov : array_like
        Real symmetric 2n x 2n covariance matrix in xxpp ordering.
    mean : array_like, optional
        First moments; always zero in this package and kept for generality.
    check : bool
        Verify physicality (every symplectic eigenvalue >= 1/2).
    """

    cov: np.ndarray
    mean: np.ndarray | None = None
    check: bool = field(default=True, repr=False, compare=False)
    n_modes: int = field(init=False)

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        n = _check_square_even(cov)
        if _symmetry_defect(cov) > _SYM_RTOL:
            raise InvalidState("covariance matrix is not symmetric")
        cov = 0.5 * (cov + cov.T)
        cov.setflags(write=False)
        mean = np.zeros(2 * n) if self.mean is None else np.array(self.mean, dtype=float)
        if mean.shape != (2 * n,):
            raise DimensionMismatch("mean vector has the wrong length")
        mean.setflags(write=False)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "n_modes", n)
        if self.check:
            try:
                nu_min = symplectic_eigenvalues(cov)[-1]
            except NonPositiveDefinite as exc:
                raise InvalidState(str(exc)) from exc
            if nu_min < 0.5 - _PHYS_TOL:
                raise InvalidState(f"symplectic eigenvalue {nu_min:.6g} < 1/2")

    def symplectic_eigenvalues(self) -> np.ndarray:
        return symplectic_eigenvalues(self.cov)

    def is_pure(self, tol: float = 1e-9) -> bool:
        return bool(np.all(np.abs(self.symplectic_eigenvalues() - 0.5) <= tol))


def williamson(cov: np.ndarray) -> tuple[SymplecticMatrix, np.ndarray]:
    """Williamson decomposition ``S cov S^T = diag(nu) (+) diag(nu)``.

    Returns the symplectic ``S`` and the symplectic eigenvalues ``nu`` sorted
    in descending order. ``S`` is not unique; any valid choice is returned.

    Raises
    ------
    NonPositiveDefinite
        If ``cov`` has a non-positive eigenvalue.
    """
    cov = np.asarray(cov, dtype=float)
    n = _check_square_even(cov)
    cov = 0.5 * (cov + cov.T)
    _, _, vmh = _sqrt_and_invsqrt(cov)
    # V^{-1/2} Omega V^{-1/2} is antisymmetric with eigenvalues +-i/nu
    anti = vmh @ symplectic_form(n) @ vmh
    anti = 0.5 * (anti - anti.T)
    perm = xxpp_to_xpxp(n)
    # start the Schur iteration in interleaved ordering so 2x2 blocks pair x_k, p_k
    blocks, z = la.schur(anti[np.ix_(perm, perm)], output="real")
    z_full = np.empty_like(z)
    z_full[perm] = z
    inv_nu = np.empty(n)
    for k in range(n):
        i = 2 * k
        b = blocks[i, i + 1]
        if b < 0:
            z_full[:, [i, i + 1]] = z_full[:, [i + 1, i]]
            b = -b
        inv_nu[k] = b
    nu = 1.0 / inv_nu
    order = np.argsort(-nu, kind="stable")
    nu = nu[order]
    cols_x = z_full[:, 0::2][:, order]
    cols_p = z_full[:, 1::2][:, order]
    ortho = np.hstack([cols_x, cols_p])
    d_half = np.sqrt(np.concatenate([nu, nu]))
    s = (d_half[:, None] * ortho.T) @ vmh
    # symplectic by construction; the defect grows with the condition number of cov
    return SymplecticMatrix(s, check=False), nu


def apply_symplectic(s: SymplecticMatrix, state: GaussianState) -> GaussianState:
    """Transform ``state`` by ``cov -> S cov S^T``."""
    if s.n_modes != state.n_modes:
        raise DimensionMismatch(f"{s.n_modes}-mode symplectic on {state.n_modes}-mode state")
    return GaussianState(s.mat @ state.cov @ s.mat.T, s.mat @ state.mean, check=False)


def _mode_indices(n_modes: int, modes: Sequence[int]) -> np.ndarray:
    modes = [int(m) for m in modes]
    if len(set(modes)) != len(modes):
        raise IndexOutOfRange(f"repeated mode indices in {modes}")
    for m in modes:
        if not 0 <= m < n_modes:
            raise IndexOutOfRange(f"mode {m} outside 0..{n_modes - 1}")
    modes = np.asarray(modes, dtype=int)
    return np.concatenate([modes, modes + n_modes])


def marginal(state: GaussianState, modes: Sequence[int]) -> GaussianState:
    """Reduced state on ``modes`` (partial trace over the others)."""
    idx = _mode_indices(state.n_modes, modes)
    return GaussianState(state.cov[np.ix_(idx, idx)], state.mean[idx], check=False)


def direct_sum(*states: GaussianState) -> GaussianState:
    """Tensor product of Gaussian states, modes ordered as given."""
    ns = [s.n_modes for s in states]
    n = sum(ns)
    cov = np.zeros((2 * n, 2 * n))
    mean = np.zeros(2 * n)
    offset = 0
    for s, k in zip(states, ns):
        dst = np.concatenate([np.arange(offset, offset + k), n + np.arange(offset, offset + k)])
        cov[np.ix_(dst, dst)] = s.cov
        mean[dst] = s.mean
        offset += k
    return GaussianState(cov, mean, check=False)


@dataclass(frozen=True)
class StateDiagnostics:
    symmetry_defect: float
    min_nu_excess: float
    valid: bool
    pure: bool


def validate_state(cov: np.ndarray) -> StateDiagnostics:
    """Report physicality of a candidate covariance matrix without raising.

    ``min_nu_excess`` is the smallest symplectic eigenvalue minus 1/2 (``-inf``
    if the matrix is not positive definite).
    """
    cov = np.asarray(cov, dtype=float)
    _check_square_even(cov)
    defect = _symmetry_defect(cov)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IllConditionedWarning)
            nu = symplectic_eigenvalues(cov)
    except NonPositiveDefinite:
        return StateDiagnostics(defect, -np.inf, False, False)
    excess = float(nu[-1] - 0.5)
    valid = defect <= _SYM_RTOL and excess >= -_PHYS_TOL
    pure = valid and bool(np.all(np.abs(nu - 0.5) <= 1e-9))
    return StateDiagnostics(defect, excess, valid, pure)
