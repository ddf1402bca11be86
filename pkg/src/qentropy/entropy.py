"""Spectral (eigendecomposition-based) entropy formulas, in nats.

These are the reference values the integral representations are checked
against, so they deliberately use nothing but ``eigh`` and logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, WeightError
from .linalg import check_same_dim, eig_hermitian, eps_eig, spectrum, support_contained


@dataclass(frozen=True)
class EntropyValue:
    """An entropy-type value that may be ``+inf`` (relative entropies only).

    Infinity is a tag rather than a float so that differences such as slacks
    are never computed as ``inf - inf``.
    """

    value: float
    finite: bool = True

    @classmethod
    def infinite(cls) -> "EntropyValue":
        return cls(math.nan, False)

    def as_float(self) -> float:
        return self.value if self.finite else math.inf

    def to_json(self):
        return {"value": self.value if self.finite else None, "infinite": not self.finite}


def _xlogx(lam: np.ndarray) -> float:
    lam = lam[lam > 0]
    return float(np.sum(lam * np.log(lam)))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """``S(rho) = -tr rho log rho`` for psdh ``rho`` of any trace."""
    return -_xlogx(spectrum(rho))


def relative_entropy_spectral(rho: np.ndarray, sigma: np.ndarray) -> EntropyValue:
    """Umegaki relative entropy ``tr rho (log rho - log sigma)``.

    Infinite unless im(rho) is contained in im(sigma). ``log sigma`` is only
    formed on the support of sigma.
    """
    check_same_dim(rho, sigma)
    if not support_contained(rho, sigma):
        return EntropyValue.infinite()
    dec = eig_hermitian(sigma)
    keep = dec.eigenvalues > eps_eig(sigma)
    lam, u = dec.eigenvalues[keep], dec.eigenvectors[:, keep]
    # tr rho log sigma = sum_k log(lam_k) <u_k|rho|u_k>
    diag = np.einsum("ik,ij,jk->k", u.conj(), rho, u).real
    cross = float(np.dot(diag, np.log(lam)))
    return EntropyValue(_xlogx(spectrum(rho)) - cross)


def binary_entropy(x: float) -> float:
    """``h(x) = -x log x - (1-x) log(1-x)`` with ``h(0) = h(1) = 0``."""
    if x < -1e-12 or x > 1 + 1e-12 or math.isnan(x):
        raise DomainError(f"binary entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    out = 0.0
    if x > 0:
        out -= x * math.log(x)
    if x < 1:
        out -= (1 - x) * math.log1p(-x)
    return out


def check_weights(weights: Sequence[float], count: int | None = None) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if count is not None and w.shape != (count,):
        raise WeightError(f"expected {count} weights, got {w.shape}")
    if np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
        raise WeightError("weights must be nonnegative and sum to 1")
    return w


def holevo_chi(states: Sequence[np.ndarray], weights: Sequence[float]) -> float:
    """Entropy of the mixture minus the mixture of entropies."""
    check_same_dim(*states)
    w = check_weights(weights, len(states))
    mix = sum(q * s for q, s in zip(w, states))
    return von_neumann_entropy(mix) - sum(q * von_neumann_entropy(s) for q, s in zip(w, states))


def kl_divergence(p, q) -> EntropyValue:
    """Classical relative entropy of two nonnegative vectors."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    if np.any((p > 0) & (q <= 0)):
        return EntropyValue.infinite()
    m = p > 0
    return EntropyValue(float(np.sum(p[m] * np.log(p[m] / q[m]))))
