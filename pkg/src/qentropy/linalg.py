"""Finite-dimensional Hermitian linear algebra.

Matrices are plain ``numpy`` arrays. The ``as_*`` validators return a
Hermitianized complex copy ((M + M^H)/2) or raise; every other function in
the package assumes its inputs have been through one of them.

Eigenvalues within ``eps_eig`` of zero are clamped to exactly zero before any
signed-trace or support computation, so the negative part of a psdh input is
exactly zero rather than a few ulps of noise.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NotDensity,
    NotHermitian,
    NotPositive,
    ValidationError,
)

EIG_REL = 2.0**-40
HERM_REL = 1e-12
TRACE_TOL = 1e-12


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # ascending, real
    eigenvectors: np.ndarray  # unitary, columns

    def reconstruct(self) -> np.ndarray:
        u, lam = self.eigenvectors, self.eigenvalues
        return (u * lam) @ u.conj().T


def max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def eps_eig(a: np.ndarray) -> float:
    """Zero-eigenvalue threshold ``n * max|a_ij| * 2**-40``."""
    return a.shape[-1] * max_abs(a) * EIG_REL


def hermiticity_defect(m: np.ndarray) -> float:
    m = np.asarray(m)
    return max_abs(m - m.conj().T)


def _square(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValidationError(f"expected a nonempty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


def as_hermitian(m, eps: float | None = None) -> np.ndarray:
    """Validate ``m`` as Hermitian and return its exact Hermitian part."""
    a = _square(m)
    tol = HERM_REL * max(1.0, max_abs(a)) if eps is None else eps
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NotHermitian(f"hermiticity defect {defect:.3g} exceeds {tol:.3g}")
    return (a + a.conj().T) / 2


def as_psdh(m, eps: float | None = None) -> np.ndarray:
    a = as_hermitian(m)
    lam_min = float(np.linalg.eigvalsh(a)[0])
    tol = eps_eig(a) if eps is None else eps
    if lam_min < -tol:
        raise NotPositive(f"smallest eigenvalue {lam_min:.3g} below -{tol:.3g}")
    return a


def as_density(m, eps_trace: float = TRACE_TOL) -> np.ndarray:
    a = as_psdh(m)
    tr = float(np.trace(a).real)
    if abs(tr - 1.0) > eps_trace:
        raise NotDensity(f"trace {tr!r} differs from 1 by more than {eps_trace:g}")
    return a


def check_same_dim(*mats: np.ndarray) -> int:
    dims = {a.shape for a in mats}
    if len(dims) != 1:
        raise DimensionMismatch(f"shape mismatch: {sorted(dims)}")
    return mats[0].shape[0]


def eig_hermitian(a: np.ndarray) -> SpectralDecomposition:
    """Spectral decomposition with ascending eigenvalues.

    Raises ConvergenceFailure if LAPACK does not converge or the
    reconstruction error exceeds ``1e-10 * max|a_ij| * n``.
    """
    try:
        lam, u = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    dec = SpectralDecomposition(lam, u)
    n = a.shape[0]
    tol = 1e-10 * max(max_abs(a), np.finfo(float).tiny) * n
    if max_abs(dec.reconstruct() - a) > tol:
        raise ConvergenceFailure("eigendecomposition failed reconstruction check")
    return dec


def clamp_zero(lam: np.ndarray, eps: float | np.ndarray) -> np.ndarray:
    lam = np.array(lam, dtype=float, copy=True)
    lam[np.abs(lam) <= eps] = 0.0
    return lam


def spectrum(a: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues with the near-zero ones clamped to 0."""
    try:
        lam = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return clamp_zero(lam, eps_eig(a))


def tr_signed(a: np.ndarray) -> tuple[float, float]:
    """Return ``(tr+ a, tr- a)``: the positive and negative spectral mass."""
    lam = spectrum(a)
    return float(lam[lam > 0].sum()), float(-lam[lam < 0].sum())


def trace_norm(a: np.ndarray) -> float:
    plus, minus = tr_signed(a)
    return plus + minus


def positive_part(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split ``a = a_plus - a_minus`` with orthogonal psdh parts."""
    dec = eig_hermitian(a)
    lam = clamp_zero(dec.eigenvalues, eps_eig(a))
    u = dec.eigenvectors
    plus = (u * np.maximum(lam, 0)) @ u.conj().T
    minus = (u * np.maximum(-lam, 0)) @ u.conj().T
    return plus, minus


def abs_matrix(a: np.ndarray) -> np.ndarray:
    plus, minus = positive_part(a)
    return plus + minus


def support_basis(a: np.ndarray) -> np.ndarray:
    """Orthonormal columns spanning the range of the psdh matrix ``a``."""
    dec = eig_hermitian(a)
    return dec.eigenvectors[:, dec.eigenvalues > eps_eig(a)]


def support_contained(rho: np.ndarray, sigma: np.ndarray) -> bool:
    """True iff im(rho) lies in im(sigma), up to the clamping tolerances."""
    check_same_dim(rho, sigma)
    dec = eig_hermitian(sigma)
    kernel = dec.eigenvectors[:, dec.eigenvalues <= eps_eig(sigma)]
    if kernel.shape[1] == 0:
        return True
    block = kernel.conj().T @ rho @ kernel
    return max_abs(block) <= 1e-10 * max_abs(rho)


def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def ginibre(n: int, k: int, rng) -> np.ndarray:
    rng = as_rng(rng)
    return (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) / np.sqrt(2)


def random_density(n: int, rank: int | None = None, seed=None) -> np.ndarray:
    """Random density matrix ``G G^H / tr(G G^H)`` with ``G`` an n x rank Ginibre matrix.

    Deterministic for a fixed integer ``seed``.
    """
    rank = n if rank is None else rank
    if not 1 <= rank <= n:
        raise ValidationError(f"rank must lie in [1, {n}], got {rank}")
    g = ginibre(n, rank, seed)
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    return (rho + rho.conj().T) / 2


def random_hermitian(n: int, seed=None, scale: float = 1.0) -> np.ndarray:
    """GUE-style Hermitian matrix with unit trace norm times ``scale``."""
    g = ginibre(n, n, seed)
    h = (g + g.conj().T) / 2
    return scale * h / trace_norm(h)


def random_unitary(n: int, seed=None) -> np.ndarray:
    """Haar-random unitary via QR with the phase correction."""
    q, r = np.linalg.qr(ginibre(n, n, seed))
    d = np.diagonal(r)
    return q * (d / np.abs(d))
