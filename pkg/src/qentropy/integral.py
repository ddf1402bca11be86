"""Integral representations driven by the negative spectral mass of a pencil.

Relative entropy of psdh ``rho``, ``sigma`` with ``A(t) = (1-t) rho + t sigma``::

    D(rho||sigma) = tr(rho - sigma) + int_R tr- A(t) / (|t| (t-1)^2) dt            (form one)
                  = int_{-inf}^0 (tr+ A(t) - tr rho) / (|t| (t-1)^2) dt
                    + int_0^inf tr- A(t) / (|t| (t-1)^2) dt                        (form two)

Directional derivatives of the von Neumann entropy, ``m >= 2``::

    -S(rho + t sigma)^(m)(0) / m! = int_R tr-(rho + t sigma) / (|t| t^m) dt

Both integrands vanish on the positivity window of the pencil, so only the
two tails outside it are ever integrated numerically.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .entropy import EntropyValue, von_neumann_entropy
from .errors import DomainError, QuadNotConverged, StencilOutOfWindow, SupportViolation
from .linalg import abs_matrix, as_hermitian, as_psdh, check_same_dim, eps_eig, spectrum, support_basis, support_contained
from .pencil import Form, Pencil
from .quadrature import QuadConfig, QuadResult, integrate

MAX_ORDER = 20
RIDDERS_CON = 1.4
RIDDERS_NTAB = 10
RIDDERS_SAFE = 2.0


class IntegralForm(enum.Enum):
    ONE = 1
    TWO = 2


def _restrict(rho: np.ndarray, sigma: np.ndarray, onto: np.ndarray):
    """Compress both matrices onto the range of the psdh matrix ``onto``."""
    if spectrum(onto)[0] > 0:
        return rho, sigma
    v = support_basis(onto)
    return v.conj().T @ rho @ v, v.conj().T @ sigma @ v


def _finish(res: QuadResult, strict: bool, what: str) -> QuadResult:
    if strict and not res.converged:
        raise QuadNotConverged(
            f"{what}: error estimate {res.error_estimate:.3g} after {res.evaluations} evaluations",
            partial=res,
        )
    return res


def _affine_weight(t):
    return 1.0 / (np.abs(t) * (t - 1.0) ** 2)


def relative_entropy_integral(
    rho,
    sigma,
    form: IntegralForm | int = IntegralForm.ONE,
    qcfg: QuadConfig | None = None,
    strict: bool = True,
) -> tuple[EntropyValue, QuadResult]:
    """Quantum relative entropy from the negative mass of the segment pencil.

    Returns the value (tagged infinite when im(rho) is not inside im(sigma))
    and the combined quadrature diagnostics. With ``strict`` a non-converged
    quadrature raises ``QuadNotConverged`` carrying the partial result.
    """
    rho, sigma = as_psdh(rho), as_psdh(sigma)
    check_same_dim(rho, sigma)
    form = IntegralForm(form)
    qcfg = qcfg or QuadConfig()
    if not support_contained(rho, sigma):
        return EntropyValue.infinite(), QuadResult.zero()
    trace_diff = float(np.trace(rho - sigma).real)
    if eps_eig(sigma) == 0 or spectrum(sigma)[-1] <= 0:
        # sigma = 0 forces rho = 0
        return EntropyValue(trace_diff), QuadResult.zero()

    rho_s, sigma_s = _restrict(rho, sigma, sigma)
    pencil = Pencil(rho_s, sigma_s, Form.AFFINE)
    win = pencil.positivity_window()
    kinks = pencil.crossings()

    def neg_part(ts):
        out = np.zeros_like(ts)
        outside = ~win.contains(ts)
        if outside.any():
            t = ts[outside]
            out[outside] = pencil.tr_neg_many(t) * _affine_weight(t)
        return out

    if form is IntegralForm.ONE:
        res = integrate(neg_part, -math.inf, math.inf, [win.t_lo, 0.0, 1.0, win.t_hi, *kinks], qcfg, vectorized=True)
        res = _finish(res, strict, "relative entropy (form one)")
        return EntropyValue(trace_diff + res.value), res

    tr_rho = float(np.trace(rho_s).real)
    tr_diff_s = tr_rho - float(np.trace(sigma_s).real)

    def pos_deficit(ts):
        # inside the window tr+ A(t) = tr A(t), so the integrand is exactly tr(rho - sigma)/(t-1)^2
        out = tr_diff_s / (ts - 1.0) ** 2
        outside = ~win.contains(ts)
        if outside.any():
            t = ts[outside]
            out[outside] = (pencil.tr_pos_many(t) - tr_rho) * _affine_weight(t)
        return out

    left = integrate(pos_deficit, -math.inf, 0.0, [win.t_lo, *kinks], qcfg, vectorized=True)
    right = integrate(neg_part, 0.0, math.inf, [1.0, win.t_hi, *kinks], qcfg, vectorized=True)
    res = _finish(left + right, strict, "relative entropy (form two)")
    return EntropyValue(res.value), res


def _check_order(m: int) -> int:
    if int(m) != m or m < 2:
        raise DomainError(f"derivative order must be an integer >= 2, got {m!r}")
    if m > MAX_ORDER:
        raise DomainError(f"m exceeds {MAX_ORDER}")
    return int(m)


def _ray_pencil(rho, sigma) -> Pencil:
    rho, sigma = as_psdh(rho), as_hermitian(sigma)
    check_same_dim(rho, sigma)
    if not support_contained(abs_matrix(sigma), rho):
        raise SupportViolation("direction sigma must satisfy im(sigma) in im(rho)")
    return Pencil(*_restrict(rho, sigma, rho), Form.RAY)


def entropy_derivative_integral(
    rho,
    sigma,
    m: int = 2,
    qcfg: QuadConfig | None = None,
    strict: bool = True,
) -> tuple[float, QuadResult]:
    """``-S(rho + t sigma)^(m)(0) / m!`` by integrating ``tr-(rho + t sigma) / (|t| t^m)``."""
    m = _check_order(m)
    qcfg = qcfg or QuadConfig()
    rho = as_psdh(rho)
    if spectrum(rho)[-1] <= 0:
        as_hermitian(sigma)
        if np.any(sigma):
            raise SupportViolation("rho = 0 admits only sigma = 0")
        return 0.0, QuadResult.zero()
    pencil = _ray_pencil(rho, sigma)
    win = pencil.positivity_window()
    kinks = pencil.crossings()

    def integrand(ts):
        out = np.zeros_like(ts)
        outside = ~win.contains(ts)
        if outside.any():
            t = ts[outside]
            out[outside] = pencil.tr_neg_many(t) / (np.abs(t) * t**m)
        return out

    res = integrate(integrand, -math.inf, math.inf, [win.t_lo, 0.0, win.t_hi, *kinks], qcfg, vectorized=True)
    res = _finish(res, strict, f"entropy derivative (m={m})")
    return res.value, res


def central_weights(m: int, p: int) -> np.ndarray:
    """Weights ``w_k`` on offsets ``k = -p..p`` with ``sum w_k f(k h) / h^m ~ f^(m)(0)``."""
    k = np.arange(-p, p + 1, dtype=float)
    vander = np.vander(k, increasing=True).T
    rhs = np.zeros(2 * p + 1)
    rhs[m] = math.factorial(m)
    return np.linalg.solve(vander, rhs)


def entropy_derivative_fd(
    rho,
    sigma,
    m: int = 2,
    step: float | None = None,
    return_error: bool = False,
):
    """m-th derivative of ``t -> S(rho + t sigma)`` at 0 by central differences.

    A symmetric ``2*ceil(m/2)+1`` point stencil is evaluated at steps
    ``h, h/1.4, h/1.4**2, ...`` and Richardson-extrapolated in ``h**2``
    (Ridders' tableau), stopping once higher orders stop improving. Every
    stencil point must stay inside the positivity window of the ray, otherwise
    ``StencilOutOfWindow``. The default initial step puts the outermost
    stencil point at a fifth of the window radius; nearly degenerate
    spectra put complex singularities close to the real axis, and larger
    starting steps then extrapolate from garbage.
    """
    m = _check_order(m)
    rho, sigma = as_psdh(rho), as_hermitian(sigma)
    check_same_dim(rho, sigma)
    if not np.any(sigma):
        return (0.0, 0.0) if return_error else 0.0
    pencil = Pencil(rho, sigma, Form.RAY)
    win = pencil.positivity_window()
    p = math.ceil(m / 2)
    h = 0.2 * win.radius / p if step is None else float(step)
    if not math.isfinite(h):
        h = 1.0
    if not (h > 0 and p * h < win.radius * (1 - 1e-9)):
        raise StencilOutOfWindow(f"stencil reach {p * h:.3g} leaves window of radius {win.radius:.3g}")
    w = central_weights(m, p)
    offsets = np.arange(-p, p + 1)

    def diff(hh):
        vals = np.array([von_neumann_entropy(pencil.eval(k * hh)) for k in offsets])
        return float(w @ vals) / hh**m

    con2 = RIDDERS_CON**2
    best, err = math.nan, math.inf
    prev = [diff(h)]
    for _ in range(1, RIDDERS_NTAB):
        h /= RIDDERS_CON
        row = [diff(h)]
        fac = con2
        for j in range(1, len(prev) + 1):
            row.append((row[j - 1] * fac - prev[j - 1]) / (fac - 1))
            fac *= con2
            errt = max(abs(row[j] - row[j - 1]), abs(row[j] - prev[j - 1]))
            if errt <= err:
                best, err = row[j], errt
        if abs(row[-1] - prev[-1]) >= RIDDERS_SAFE * err:
            break
        prev = row
    return (best, err) if return_error else best
