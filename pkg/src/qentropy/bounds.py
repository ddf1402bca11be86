"""Two-outcome reduction of state pairs and lower bounds on entropy concavity.

For density matrices ``rho0 != rho1`` the projector onto the positive part of
``rho1 - rho0`` defines a two-outcome measurement that keeps the trace
distance. Any divergence monotone under measurements therefore cannot be
smaller on the pair than on the resulting binary classical states, which
gives the Holevo-quantity bound ``chi_lower_bound_min`` below. The
closed-form ``explicit_weaker_bound`` and ``kim_bound`` sit underneath it.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .channels import Measurement
from .entropy import EntropyValue, binary_entropy, holevo_chi, kl_divergence, relative_entropy_spectral
from .errors import DomainError, NumericalError, StatesEqual, ValidationError
from .linalg import as_density, check_same_dim, clamp_zero, eig_hermitian, eps_eig, max_abs, positive_part, trace_norm

GRID_POINTS = 1024
GOLDEN_WIDTH = 1e-10
_INVPHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class BinaryClassicalState:
    """``diag(t, 1 - t)``."""

    t: float

    def __post_init__(self):
        if not -1e-12 <= self.t <= 1 + 1e-12:
            raise DomainError(f"binary state parameter {self.t!r} outside [0, 1]")

    def matrix(self) -> np.ndarray:
        return np.diag([self.t, 1.0 - self.t]).astype(np.complex128)

    @property
    def probs(self) -> np.ndarray:
        return np.array([self.t, 1.0 - self.t])


@dataclass(frozen=True)
class BinaryReduction:
    e_plus: np.ndarray
    e_minus: np.ndarray
    t0: float
    t1: float
    trace_distance: float  # ||rho1 - rho0||_1

    @property
    def measurement(self) -> Measurement:
        return Measurement((self.e_plus, self.e_minus))


def distinguishing_measurement(rho0, rho1) -> BinaryReduction:
    """Projectors onto the positive / non-positive eigenspaces of ``rho1 - rho0``.

    Eigenvalues within ``eps_eig`` of zero go to the minus side.
    """
    rho0, rho1 = as_density(rho0), as_density(rho1)
    n = check_same_dim(rho0, rho1)
    if n < 2:
        raise ValidationError("the reduction needs dimension at least 2")
    diff = rho1 - rho0
    dist = trace_norm(diff)
    if dist <= eps_eig(np.eye(n)):
        raise StatesEqual("rho0 and rho1 coincide")
    dec = eig_hermitian(diff)
    lam = clamp_zero(dec.eigenvalues, eps_eig(diff))
    u_plus = dec.eigenvectors[:, lam > 0]
    e_plus = u_plus @ u_plus.conj().T
    e_minus = np.eye(n) - e_plus
    e_minus = (e_minus + e_minus.conj().T) / 2
    t0 = float(np.trace(e_plus @ rho0).real)
    t1 = float(np.trace(e_plus @ rho1).real)
    return BinaryReduction(e_plus, e_minus, t0, t1, dist)


def reduce_to_binary(rho0, rho1, check: bool = True) -> tuple[BinaryClassicalState, BinaryClassicalState]:
    """Binary classical states with the same trace distance as ``(rho0, rho1)``.

    With ``check`` the trace-distance identity and the non-increase of the
    relative entropy are verified and a violation raises ``NumericalError``.
    """
    red = distinguishing_measurement(rho0, rho1)
    b0, b1 = BinaryClassicalState(min(max(red.t0, 0.0), 1.0)), BinaryClassicalState(min(max(red.t1, 0.0), 1.0))
    if check:
        if abs(2 * (red.t1 - red.t0) - red.trace_distance) > 1e-10:
            raise NumericalError("binary reduction changed the trace distance")
        before = relative_entropy_spectral(as_density(rho0), as_density(rho1))
        after = kl_divergence(b0.probs, b1.probs)
        if before.finite and (not after.finite or after.value > before.value + 1e-8):
            raise NumericalError("relative entropy increased under the binary reduction")
    return b0, b1


def binary_relative_entropy(b0: BinaryClassicalState, b1: BinaryClassicalState) -> EntropyValue:
    return kl_divergence(b0.probs, b1.probs)


def binary_chi(b0: BinaryClassicalState, b1: BinaryClassicalState, q0: float, q1: float) -> float:
    return holevo_chi([b0.matrix(), b1.matrix()], [q0, q1])


def _check_q(q0: float, q1: float):
    if min(q0, q1) < 0 or max(q0, q1) > 1 or abs(q0 + q1 - 1) > 1e-12:
        raise DomainError(f"weights ({q0!r}, {q1!r}) must be nonnegative and sum to 1")


def _check_T(T: float):
    if not 0 <= T <= 2:
        raise DomainError(f"trace distance {T!r} outside [0, 2]")


def mutual_info_binary(t0: float, t1: float, q0: float, q1: float) -> float:
    """``h(q0 t0 + q1 t1) - q0 h(t0) - q1 h(t1)``."""
    for x in (t0, t1):
        if not 0 <= x <= 1:
            raise DomainError(f"probability {x!r} outside [0, 1]")
    _check_q(q0, q1)
    return binary_entropy(q0 * t0 + q1 * t1) - q0 * binary_entropy(t0) - q1 * binary_entropy(t1)


@dataclass(frozen=True)
class BoundMinimum:
    minimum: float
    argmin_t0: float


def _golden(f, a: float, b: float, width: float) -> tuple[float, float]:
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def chi_lower_bound_min(T: float, q0: float, q1: float) -> BoundMinimum:
    """Minimum of ``I(t0, t0 + T/2; q0, q1)`` over ``0 <= t0 <= 1 - T/2``.

    A 1024-point grid locates the basin, golden-section search refines it to
    width 1e-10. The grid endpoints are kept as candidates so a boundary
    minimum is not lost.
    """
    _check_T(T)
    _check_q(q0, q1)
    half = T / 2
    hi = max(1.0 - half, 0.0)

    def phi(t0):
        t0 = min(max(t0, 0.0), hi)
        return mutual_info_binary(t0, min(t0 + half, 1.0), q0, q1)

    if T == 0:
        return BoundMinimum(0.0, 0.0)
    if hi == 0.0:
        return BoundMinimum(phi(0.0), 0.0)
    grid = np.linspace(0.0, hi, GRID_POINTS)
    vals = np.array([phi(x) for x in grid])
    k = int(np.argmin(vals))
    lo_b, hi_b = grid[max(k - 1, 0)], grid[min(k + 1, GRID_POINTS - 1)]
    x, fx = _golden(phi, lo_b, hi_b, GOLDEN_WIDTH)
    if vals[k] < fx:
        x, fx = float(grid[k]), float(vals[k])
    # mutual information is nonnegative; only rounding can push it below 0
    return BoundMinimum(max(float(fx), 0.0), float(x))


def explicit_weaker_bound(T: float, q0: float, q1: float) -> float:
    """``4 q0 q1 (log 2 - h((2 + T)/4))``."""
    _check_T(T)
    _check_q(q0, q1)
    return 4 * q0 * q1 * (math.log(2) - binary_entropy((2 + T) / 4))


def kim_bound(T: float, q0: float, q1: float) -> float:
    """``q0 q1 T^2 / 2``."""
    _check_T(T)
    _check_q(q0, q1)
    return q0 * q1 * T * T / 2


BOUNDS_COLUMNS = ("T", "q1", "min_bound", "explicit_bound", "kim_bound", "argmin_t0")


def bounds_table(grid_T: int, grid_q: int) -> list[dict]:
    """Rows over ``T in linspace(0, 2, grid_T)``, ``q1 in linspace(0.01, 0.99, grid_q)``."""
    if grid_T < 2 or grid_q < 2:
        raise ValidationError("grid sizes must be at least 2")
    rows = []
    for T in np.linspace(0.0, 2.0, grid_T):
        for q1 in np.linspace(0.01, 0.99, grid_q):
            T, q1 = float(T), float(q1)
            q0 = 1.0 - q1
            best = chi_lower_bound_min(T, q0, q1)
            rows.append({
                "T": T,
                "q1": q1,
                "min_bound": best.minimum,
                "explicit_bound": explicit_weaker_bound(T, q0, q1),
                "kim_bound": kim_bound(T, q0, q1),
                "argmin_t0": best.argmin_t0,
            })
    return rows


def write_bounds_csv(rows: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(BOUNDS_COLUMNS)
        for r in rows:
            w.writerow([f"{r[c]:.17g}" for c in BOUNDS_COLUMNS])


def collinear_states(sigma: np.ndarray, t0: float, t1: float) -> tuple[np.ndarray, np.ndarray]:
    """States ``t sigma+/tr sigma+ + (1-t) sigma-/tr sigma-`` for a traceless ``sigma``.

    They lie on a line through ``|sigma|`` and are the equality case of the
    binary reduction. Test-fixture generator.
    """
    plus, minus = positive_part(sigma)
    tp, tm = np.trace(plus).real, np.trace(minus).real
    if tp <= 0 or tm <= 0 or max_abs(plus @ minus) > 1e-10:
        raise ValidationError("sigma needs nonzero positive and negative parts")
    return tuple(t * plus / tp + (1 - t) * minus / tm for t in (t0, t1))
