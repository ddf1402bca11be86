"""Positive trace-nonincreasing linear maps and data-processing checks.

A map is one of the small frozen dataclasses below; ``apply_map(m, a)``
dispatches on them. None of the checks assume complete positivity, which is
the point of including :class:`Transpose`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .entropy import EntropyValue, holevo_chi, relative_entropy_spectral
from .errors import DimensionMismatch, MalformedSpec, MapNotTracePreservingOnRho
from .linalg import (
    EIG_REL,
    as_density,
    as_hermitian,
    as_psdh,
    as_rng,
    check_same_dim,
    ginibre,
    max_abs,
    positive_part,
    random_unitary,
    tr_signed,
)

DEFAULT_GRID = (-3.0, -2.0, -1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0)
MONO_TOL = 1e-10


@dataclass(frozen=True)
class Measurement:
    """POVM ``{E_i}``; ``A -> diag(tr E_1 A, ..., tr E_k A)``."""

    povm: tuple

    def __post_init__(self):
        ops = tuple(as_psdh(e) for e in self.povm)
        if not ops:
            raise MalformedSpec("a measurement needs at least one effect")
        check_same_dim(*ops)
        object.__setattr__(self, "povm", ops)


@dataclass(frozen=True)
class Kraus:
    """``A -> sum_i K_i A K_i^H`` with possibly rectangular ``K_i``."""

    ops: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=np.complex128) for k in self.ops)
        if not ops or any(k.ndim != 2 for k in ops) or len({k.shape for k in ops}) != 1:
            raise MalformedSpec("Kraus operators must be equally shaped 2-d arrays")
        object.__setattr__(self, "ops", ops)


@dataclass(frozen=True)
class Transpose:
    """Matrix transpose: positive and trace preserving but not completely positive."""


@dataclass(frozen=True)
class Pinching:
    """``A -> sum_j P_j A P_j`` for a resolution of the identity into projectors."""

    projectors: tuple

    def __post_init__(self):
        ps = tuple(as_hermitian(p) for p in self.projectors)
        if not ps:
            raise MalformedSpec("pinching needs at least one projector")
        n = check_same_dim(*ps)
        tol = 1e-10
        for i, p in enumerate(ps):
            if max_abs(p @ p - p) > tol:
                raise MalformedSpec(f"projector {i} is not idempotent")
        for i, j in itertools.combinations(range(len(ps)), 2):
            if max_abs(ps[i] @ ps[j]) > tol:
                raise MalformedSpec(f"projectors {i} and {j} are not orthogonal")
        if max_abs(sum(ps) - np.eye(n)) > tol:
            raise MalformedSpec("projectors do not sum to the identity")
        object.__setattr__(self, "projectors", ps)


@dataclass(frozen=True)
class PartialTrace:
    """Trace out factor ``side`` ("A" or "B") of ``C^dA (x) C^dB``."""

    dims: tuple
    side: str = "B"

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 2 or min(dims) < 1 or self.side not in ("A", "B"):
            raise MalformedSpec(f"bad partial trace dims={self.dims!r} side={self.side!r}")
        object.__setattr__(self, "dims", dims)


@dataclass(frozen=True)
class Compose:
    """Apply ``maps`` left to right."""

    maps: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not self.maps:
            raise MalformedSpec("compose needs at least one map")
        object.__setattr__(self, "maps", tuple(self.maps))


PositiveMap = Union[Measurement, Kraus, Transpose, Pinching, PartialTrace, Compose]


def apply_map(m: PositiveMap, a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    if isinstance(m, Measurement):
        _need(m.povm[0].shape[0], n)
        # tr(E A) = sum_ij E_ji A_ij; real for Hermitian E, A
        probs = [np.sum(e.T * a).real for e in m.povm]
        return np.diag(np.array(probs, dtype=np.complex128))
    if isinstance(m, Kraus):
        _need(m.ops[0].shape[1], n)
        out = sum(k @ a @ k.conj().T for k in m.ops)
        return (out + out.conj().T) / 2
    if isinstance(m, Transpose):
        return a.T.copy()
    if isinstance(m, Pinching):
        _need(m.projectors[0].shape[0], n)
        return sum(p @ a @ p for p in m.projectors)
    if isinstance(m, PartialTrace):
        da, db = m.dims
        _need(da * db, n)
        t = a.reshape(da, db, da, db)
        return np.einsum("ijkj->ik", t) if m.side == "B" else np.einsum("ijil->jl", t)
    if isinstance(m, Compose):
        for inner in m.maps:
            a = apply_map(inner, a)
        return a
    raise MalformedSpec(f"unknown map {m!r}")


def _need(expected: int, got: int):
    if expected != got:
        raise DimensionMismatch(f"map acts on dimension {expected}, got {got}")


@dataclass(frozen=True)
class MapValidation:
    trace_preserving: bool
    trace_nonincreasing: bool
    defects: tuple = ()


def _sum_check(s: np.ndarray) -> MapValidation:
    n = s.shape[0]
    gap = np.eye(n) - s
    lam = np.linalg.eigvalsh((gap + gap.conj().T) / 2)
    eps = n * max(1.0, max_abs(s)) * EIG_REL
    return MapValidation(
        trace_preserving=bool(np.max(np.abs(lam)) <= eps),
        trace_nonincreasing=bool(lam[0] >= -eps),
        defects=(float(lam[0]), float(np.max(np.abs(lam)))),
    )


def validate_map(m: PositiveMap) -> MapValidation:
    """Check trace preservation / non-increase from ``1 - sum E_i`` or ``1 - sum K^H K``.

    ``defects`` holds (smallest eigenvalue, largest |eigenvalue|) of that gap.
    """
    if isinstance(m, Measurement):
        return _sum_check(sum(m.povm))
    if isinstance(m, Kraus):
        return _sum_check(sum(k.conj().T @ k for k in m.ops))
    if isinstance(m, (Transpose, Pinching, PartialTrace)):
        return MapValidation(True, True, (0.0, 0.0))
    if isinstance(m, Compose):
        parts = [validate_map(x) for x in m.maps]
        return MapValidation(
            all(p.trace_preserving for p in parts),
            all(p.trace_nonincreasing for p in parts),
            tuple(d for p in parts for d in p.defects),
        )
    raise MalformedSpec(f"unknown map {m!r}")


@dataclass(frozen=True)
class MonotonicityResult:
    ok: bool
    plus_defect: float
    minus_defect: float
    equality_plus: bool
    equality_minus: bool

    @property
    def equality(self) -> bool:
        return self.equality_plus and self.equality_minus


def _cross_tol(a: np.ndarray) -> float:
    return MONO_TOL * max(1.0, max_abs(a)) ** 2


def tr_monotonicity_check(m: PositiveMap, a: np.ndarray) -> MonotonicityResult:
    """Compare ``tr+-`` before and after the map.

    Equality for a sign is reported only when the defect vanishes *and* the
    structural condition holds: ``tr E(A^s) = tr A^s`` with
    ``E(A^+) E(A^-) = 0``.
    """
    a = as_hermitian(a)
    ea = as_hermitian(apply_map(m, a), eps=1e-10 * max(1.0, max_abs(a)))
    plus, minus = tr_signed(a)
    eplus, eminus = tr_signed(ea)
    ap, am = positive_part(a)
    eap, eam = apply_map(m, ap), apply_map(m, am)
    cross = max_abs(eap @ eam) <= _cross_tol(a)
    d_plus, d_minus = plus - eplus, minus - eminus
    keep_plus = abs(np.trace(eap).real - plus) <= MONO_TOL * max(1.0, plus)
    keep_minus = abs(np.trace(eam).real - minus) <= MONO_TOL * max(1.0, minus)
    return MonotonicityResult(
        ok=d_plus >= -MONO_TOL and d_minus >= -MONO_TOL,
        plus_defect=d_plus,
        minus_defect=d_minus,
        equality_plus=bool(abs(d_plus) <= MONO_TOL and keep_plus and cross),
        equality_minus=bool(abs(d_minus) <= MONO_TOL and keep_minus and cross),
    )


@dataclass(frozen=True)
class EqualitySample:
    t: float
    cross_norm: float  # max |E(A^+) E(A^-)|
    defect_minus: float  # tr A^- - tr E(A^-)
    defect_plus: float  # tr A^+ - tr E(A^+)
    pair: tuple | None = None


def _equality_sample(m, a, t, pair=None) -> EqualitySample:
    ap, am = positive_part(a)
    eap, eam = apply_map(m, ap), apply_map(m, am)
    return EqualitySample(
        t=float(t),
        cross_norm=max_abs(eap @ eam),
        defect_minus=float(np.trace(am).real - np.trace(eam).real),
        defect_plus=float(np.trace(ap).real - np.trace(eap).real),
        pair=pair,
    )


@dataclass(frozen=True)
class DpiReport:
    """``rhs`` is the quantity before the map, ``lhs`` after it.

    ``slack = rhs - lhs`` is None when ``rhs`` is infinite (trivially
    satisfied) and ``-inf`` when only ``lhs`` is.
    """

    lhs: EntropyValue
    rhs: EntropyValue
    slack: float | None
    equality_diagnostic: tuple = ()

    def satisfied(self, tol: float = 1e-8) -> bool:
        return self.slack is None or self.slack >= -tol

    def equality_evidence(self, tol: float = 1e-9, ray: bool = False) -> bool:
        """Whether every sampled combination meets the equality condition.

        For the segment (``ray=False``) the trace condition is imposed on the
        positive part for ``t < 0`` and the negative part for ``t > 0``; for
        Holevo ensembles (``ray=True``) on the negative part everywhere. A
        finite grid is evidence only, never proof.
        """
        for s in self.equality_diagnostic:
            if s.cross_norm > tol:
                return False
            if ray or s.t > 0:
                if s.defect_minus > tol:
                    return False
            if not ray and s.t < 0 and s.defect_plus > tol:
                return False
        return True


def _slack(lhs: EntropyValue, rhs: EntropyValue) -> float | None:
    if not rhs.finite:
        return None
    if not lhs.finite:
        return -float("inf")
    return rhs.value - lhs.value


def _check_tp_on(m, states):
    for i, s in enumerate(states):
        gap = abs(np.trace(apply_map(m, s)).real - np.trace(s).real)
        if gap > 1e-10:
            raise MapNotTracePreservingOnRho(f"map changes the trace of state {i} by {gap:.3g}")


def dpi_check(
    m: PositiveMap,
    rho,
    sigma,
    grid: Sequence[float] = DEFAULT_GRID,
    qcfg=None,
    method: str = "spectral",
) -> DpiReport:
    """Relative entropy before and after ``m``.

    ``method="integral"`` evaluates both sides through the integral
    representation instead of the spectral formula.
    """
    rho, sigma = as_density(rho), as_density(sigma)
    check_same_dim(rho, sigma)
    _check_tp_on(m, [rho])
    erho, esigma = apply_map(m, rho), apply_map(m, sigma)
    if method == "spectral":
        rel = relative_entropy_spectral
        erho, esigma = as_psdh(erho), as_psdh(esigma)
    elif method == "integral":
        from .integral import relative_entropy_integral

        def rel(x, y):
            return relative_entropy_integral(x, y, qcfg=qcfg)[0]
    else:
        raise ValueError(f"unknown method {method!r}")
    rhs, lhs = rel(rho, sigma), rel(erho, esigma)
    samples = tuple(_equality_sample(m, (1 - t) * rho + t * sigma, t) for t in grid)
    return DpiReport(lhs, rhs, _slack(lhs, rhs), samples)


def holevo_dpi_check(
    m: PositiveMap,
    states: Sequence,
    weights: Sequence[float],
    grid: Sequence[float] = DEFAULT_GRID,
) -> DpiReport:
    """Holevo quantity of an ensemble before and after ``m``.

    Equality diagnostics are sampled on the lines through every pair of
    ensemble members.
    """
    states = [as_density(s) for s in states]
    check_same_dim(*states)
    _check_tp_on(m, states)
    rhs = EntropyValue(holevo_chi(states, weights))
    lhs = EntropyValue(holevo_chi([as_psdh(apply_map(m, s)) for s in states], weights))
    samples = tuple(
        _equality_sample(m, (1 - t) * states[i] + t * states[j], t, (i, j))
        for i, j in itertools.combinations(range(len(states)), 2)
        for t in grid
    )
    return DpiReport(lhs, rhs, _slack(lhs, rhs), samples)


def classical_mutual_information(povm: Sequence[np.ndarray], states: Sequence, weights) -> float:
    """``I(J; I)`` for input ``j ~ q`` and outcome ``i`` with ``p(i|j) = tr E_i rho_j``."""
    q = np.asarray(weights, dtype=float)
    cond = np.array([[np.trace(e @ s).real for e in povm] for s in states])
    joint = q[:, None] * cond
    pi = joint.sum(axis=0)
    mask = joint > 0
    ratio = joint[mask] / (q[:, None] * pi[None, :])[mask]
    return float(np.sum(joint[mask] * np.log(ratio)))


# random maps for the property suites


def random_povm(n: int, k: int, seed=None) -> Measurement:
    """``k`` Ginibre squares normalized by the inverse square root of their sum."""
    rng = as_rng(seed)
    raw = [g @ g.conj().T for g in (ginibre(n, n, rng) for _ in range(k))]
    lam, u = np.linalg.eigh(sum(raw))
    inv_sqrt = (u / np.sqrt(lam)) @ u.conj().T
    return Measurement(tuple(inv_sqrt @ e @ inv_sqrt for e in raw))


def random_kraus(n: int, k: int, n_out: int | None = None, seed=None) -> Kraus:
    """Trace-preserving Kraus map from a random isometry ``C^n -> C^(k n_out)``."""
    rng = as_rng(seed)
    n_out = n if n_out is None else n_out
    if k * n_out < n:
        raise MalformedSpec("isometry needs k * n_out >= n")
    v, _ = np.linalg.qr(ginibre(k * n_out, n, rng))
    return Kraus(tuple(v[i * n_out : (i + 1) * n_out] for i in range(k)))


def random_pinching(n: int, parts: int, seed=None) -> Pinching:
    rng = as_rng(seed)
    u = random_unitary(n, rng)
    labels = np.concatenate([np.arange(parts), rng.integers(0, parts, n - parts)]) if n >= parts else np.arange(n)
    return Pinching(tuple(u[:, labels == j] @ u[:, labels == j].conj().T for j in np.unique(labels)))


MAP_TAGS = ("measurement", "kraus", "transpose", "pinching", "partial_trace", "compose")


def random_map(tag: str, n: int, seed=None) -> PositiveMap:
    """A random trace-preserving map of the given kind acting on dimension ``n``.

    ``partial_trace`` needs composite ``n`` and falls back to a 1 x n split
    otherwise; ``compose`` is a transpose followed by a random measurement.
    """
    rng = as_rng(seed)
    if tag == "measurement":
        return random_povm(n, int(rng.integers(2, 5)), rng)
    if tag == "kraus":
        return random_kraus(n, int(rng.integers(1, 4)), seed=rng)
    if tag == "transpose":
        return Transpose()
    if tag == "pinching":
        return random_pinching(n, int(rng.integers(1, n + 1)), rng)
    if tag == "partial_trace":
        da = next((d for d in range(2, n) if n % d == 0), 1)
        return PartialTrace((da, n // da), "B" if rng.random() < 0.5 else "A")
    if tag == "compose":
        return Compose((Transpose(), random_povm(n, int(rng.integers(2, 5)), rng)))
    raise MalformedSpec(f"unknown map tag {tag!r}")
