"""Linear matrix pencils through a psdh matrix.

Two parameterizations are used: the affine segment ``A(t) = (1-t) rho + t sigma``
joining two psdh matrices, and the ray ``R(t) = rho + t sigma`` from a psdh
``rho`` in a Hermitian direction ``sigma``. Both are psdh on an interval
around ``t = 0`` (the positivity window) and pick up negative spectral mass
outside it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NotPositive, SupportViolation
from .linalg import (
    EIG_REL,
    abs_matrix,
    as_hermitian,
    check_same_dim,
    eps_eig,
    spectrum,
    support_contained,
)

WINDOW_CAP = 2.0**60
WINDOW_RTOL = 1e-12


class Form(enum.Enum):
    AFFINE = "affine"
    RAY = "ray"


@dataclass(frozen=True)
class PositivityWindow:
    """Interval ``(t_lo, t_hi)`` around 0 on which the pencil is psdh."""

    t_lo: float
    t_hi: float

    def contains(self, t) -> np.ndarray | bool:
        return (self.t_lo < t) & (t < self.t_hi)

    @property
    def radius(self) -> float:
        return min(-self.t_lo, self.t_hi)

    def edges(self) -> list[float]:
        return [t for t in (self.t_lo, self.t_hi) if math.isfinite(t)]


@dataclass(frozen=True, eq=False)
class Pencil:
    rho: np.ndarray
    sigma: np.ndarray
    form: Form = Form.AFFINE
    _window: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        rho = as_hermitian(self.rho)
        sigma = as_hermitian(self.sigma)
        check_same_dim(rho, sigma)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "form", Form(self.form))
        if spectrum(rho)[0] < 0:
            raise NotPositive("pencil base point rho must be psdh")
        if self.form is Form.AFFINE:
            if spectrum(sigma)[0] < 0:
                raise NotPositive("affine pencil endpoint sigma must be psdh")
        elif not support_contained(abs_matrix(sigma), rho):
            raise SupportViolation("ray direction must satisfy im(sigma) in im(rho)")

    @property
    def n(self) -> int:
        return self.rho.shape[0]

    @property
    def direction(self) -> np.ndarray:
        """Derivative of the pencil in ``t``."""
        return self.sigma - self.rho if self.form is Form.AFFINE else self.sigma

    def eval(self, t: float) -> np.ndarray:
        if self.form is Form.AFFINE:
            return (1 - t) * self.rho + t * self.sigma
        return self.rho + t * self.sigma

    def eval_many(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)[:, None, None]
        return self.rho[None] + ts * self.direction[None]

    def spectra(self, ts) -> np.ndarray:
        """Clamped ascending eigenvalues of the pencil at every ``t`` in ``ts``."""
        mats = self.eval_many(ts)
        lam = np.linalg.eigvalsh(mats)
        eps = self.n * np.max(np.abs(mats), axis=(1, 2)) * EIG_REL
        lam[np.abs(lam) <= eps[:, None]] = 0.0
        return lam

    def tr_neg_many(self, ts) -> np.ndarray:
        lam = self.spectra(ts)
        return -np.where(lam < 0, lam, 0.0).sum(axis=1)

    def tr_pos_many(self, ts) -> np.ndarray:
        lam = self.spectra(ts)
        return np.where(lam > 0, lam, 0.0).sum(axis=1)

    def tr_neg_at(self, t: float) -> float:
        return float(self.tr_neg_many([t])[0])

    def tr_pos_deficit_at(self, t: float) -> float:
        """``tr+ A(t) - tr rho`` for the affine form."""
        if self.form is not Form.AFFINE:
            raise ValueError("tr_pos_deficit_at is defined for affine pencils only")
        return float(self.tr_pos_many([t])[0]) - float(np.trace(self.rho).real)

    def _psdh_at(self, t: float) -> bool:
        a = self.eval(t)
        return np.linalg.eigvalsh(a)[0] >= -eps_eig(a)

    def _edge(self, sign: float) -> float:
        good, t = 0.0, sign
        while self._psdh_at(t):
            good = t
            if abs(t) >= WINDOW_CAP:
                return sign * math.inf
            t *= 2
        bad = t
        for _ in range(400):
            if abs(bad - good) <= WINDOW_RTOL * abs(bad):
                break
            mid = 0.5 * (good + bad)
            if self._psdh_at(mid):
                good = mid
            else:
                bad = mid
        return good

    def crossings(self) -> list[float]:
        """All real ``t`` at which the pencil is singular, ascending.

        These are the points where an eigenvalue passes through zero, i.e.
        every kink of ``t -> tr- A(t)``. Solved as a Hermitian-definite
        generalized eigenproblem against whichever endpoint is positive
        definite (``rho`` at t=0, or ``sigma`` at t=1 for the affine form);
        if neither is, only the window edges are returned.
        """
        if self.form is Form.AFFINE and spectrum(self.sigma)[0] > 0:
            base, origin = self.sigma, 1.0
        elif spectrum(self.rho)[0] > 0:
            base, origin = self.rho, 0.0
        else:
            return self.positivity_window().edges()
        try:
            mu = scipy.linalg.eigh(self.direction, base, eigvals_only=True)
        except (np.linalg.LinAlgError, ValueError):
            return self.positivity_window().edges()
        scale = float(np.max(np.abs(mu))) if mu.size else 0.0
        mu = mu[np.abs(mu) > 1e-13 * scale]
        return sorted(origin - 1.0 / mu)

    def positivity_window(self) -> PositivityWindow:
        """Maximal interval around 0 on which the pencil stays psdh.

        Each edge is bracketed by doubling from ``|t| = 1`` and then bisected
        on the smallest eigenvalue to relative width 1e-12; an edge beyond
        ``2**60`` is reported as infinite. The returned edges are on the psdh
        side of the crossing.
        """
        if not self._window:
            self._window.append(PositivityWindow(self._edge(-1.0), self._edge(1.0)))
        return self._window[0]
