"""Seeded randomized property suites.

Every trial draws its inputs from ``default_rng([seed, suite_index, trial])``
and hands them to a pure ``check_*`` function. A trial record therefore
carries serialized inputs that ``replay`` can re-run without the generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bounds, channels, io
from .entropy import holevo_chi
from .linalg import random_density, random_hermitian
from .pencil import Form, Pencil

SUITES = ("dpi", "monotonicity", "holevo", "pencil", "bounds")

TOL = {
    "dpi": 1e-8,
    "monotonicity": 1e-10,
    "holevo": 1e-8,
    "pencil": 1e-9,
    "bounds": 1e-8,
}


@dataclass
class TrialRecord:
    suite: str
    trial: int
    slack: float
    ok: bool
    inputs: dict = field(default_factory=dict)

    def to_json(self, with_inputs: bool = False) -> dict:
        out = {"suite": self.suite, "trial": self.trial, "slack": self.slack, "ok": self.ok}
        if with_inputs:
            out["inputs"] = self.inputs
        return out


def _mats(*arrays) -> list:
    return [io.matrix_to_json(a) for a in arrays]


def _unmats(objs) -> list:
    return [io.matrix_from_json(o) for o in objs]


# --- checks on explicit inputs -------------------------------------------


def check_dpi(inputs: dict):
    m = io.map_from_json(inputs["map"])
    rho, sigma = _unmats(inputs["states"])
    rep = channels.dpi_check(m, rho, sigma, grid=())
    return (math.inf if rep.slack is None else rep.slack), True


def check_monotonicity(inputs: dict):
    m = io.map_from_json(inputs["map"])
    (a,) = _unmats(inputs["states"])
    res = channels.tr_monotonicity_check(m, a)
    return min(res.plus_defect, res.minus_defect), True


def check_holevo(inputs: dict):
    m = io.map_from_json(inputs["map"])
    states = _unmats(inputs["states"])
    weights = inputs["weights"]
    rep = channels.holevo_dpi_check(m, states, weights, grid=())
    mi = channels.classical_mutual_information(m.povm, states, weights)
    return rep.slack, abs(rep.lhs.value - mi) <= 1e-10


def check_pencil(inputs: dict):
    rho, sigma, direction = _unmats(inputs["states"])
    ts = sorted(inputs["ts"])
    affine = Pencil(rho, sigma, Form.AFFINE)
    ray = Pencil(rho, direction, Form.RAY)
    margins = []
    for p in (affine, ray):
        t1, t2, t3 = ts
        f1, f2, f3 = (p.tr_neg_at(t) for t in ts)
        lam = (t3 - t2) / (t3 - t1)
        margins.append(lam * f1 + (1 - lam) * f3 - f2)
        win = p.positivity_window()
        lo, hi = max(win.t_lo, -1e6), min(win.t_hi, 1e6)
        margins.extend(-p.tr_neg_at(x) for x in np.linspace(lo, hi, 9)[1:-1])
    tr_diff = np.trace(rho - sigma).real
    for t in (-abs(ts[0]) - 0.1, -0.5):
        margins.append(-abs(affine.tr_pos_deficit_at(t) - affine.tr_neg_at(t) - abs(t) * tr_diff))
    return float(min(margins)), True


def check_bounds(inputs: dict):
    rho0, rho1 = _unmats(inputs["states"])
    q0, q1 = inputs["weights"]
    T = min(float(np.abs(np.linalg.eigvalsh(rho1 - rho0)).sum()), 2.0)
    chi = holevo_chi([rho0, rho1], [q0, q1])
    best = bounds.chi_lower_bound_min(T, q0, q1)
    b0, b1 = bounds.reduce_to_binary(rho0, rho1)
    return min(
        chi - best.minimum,
        chi - bounds.binary_chi(b0, b1, q0, q1),
        best.minimum - bounds.explicit_weaker_bound(T, q0, q1),
        bounds.explicit_weaker_bound(T, q0, q1) - bounds.kim_bound(T, q0, q1),
    ), True


# each check returns (slack, side_condition_ok)
CHECKS: dict[str, Callable[[dict], tuple]] = {
    "dpi": check_dpi,
    "monotonicity": check_monotonicity,
    "holevo": check_holevo,
    "pencil": check_pencil,
    "bounds": check_bounds,
}


# --- random input generation ------------------------------------------------

_DPI_TAGS = ("transpose", "compose", "measurement", "kraus", "pinching", "partial_trace")


def draw_inputs(suite: str, rng: np.random.Generator, n: int, trial: int) -> dict:
    if suite == "dpi":
        tag = _DPI_TAGS[trial % len(_DPI_TAGS)]
        return {
            "map": io.map_to_json(channels.random_map(tag, n, rng)),
            "states": _mats(random_density(n, seed=rng), random_density(n, seed=rng)),
        }
    if suite == "monotonicity":
        tag = channels.MAP_TAGS[trial % len(channels.MAP_TAGS)]
        return {
            "map": io.map_to_json(channels.random_map(tag, n, rng)),
            "states": _mats(random_hermitian(n, rng, scale=float(rng.uniform(0.5, 3)))),
        }
    if suite == "holevo":
        count = int(rng.integers(2, 5))
        w = rng.dirichlet(np.ones(count))
        w = (w / w.sum()).tolist()
        return {
            "map": io.map_to_json(channels.random_povm(n, int(rng.integers(2, 5)), rng)),
            "states": _mats(*(random_density(n, seed=rng) for _ in range(count))),
            "weights": w,
        }
    if suite == "pencil":
        return {
            "states": _mats(random_density(n, seed=rng), random_density(n, seed=rng), random_hermitian(n, rng)),
            "ts": sorted(rng.uniform(-6, 6, 3).tolist()),
        }
    if suite == "bounds":
        q1 = float(rng.uniform(0.01, 0.99))
        return {
            "states": _mats(random_density(n, seed=rng), random_density(n, seed=rng)),
            "weights": [1.0 - q1, q1],
        }
    raise ValueError(f"unknown suite {suite!r}")


def run_trial(suite: str, seed: int, trial: int, n: int) -> TrialRecord:
    rng = np.random.default_rng([seed, SUITES.index(suite), trial])
    inputs = draw_inputs(suite, rng, n, trial)
    slack, side_ok = CHECKS[suite](inputs)
    return TrialRecord(suite, trial, float(slack), bool(side_ok and slack >= -TOL[suite]), inputs)


def replay(record: dict) -> tuple:
    """Recompute ``(slack, side_condition_ok)`` for a serialized trial record."""
    slack, side_ok = CHECKS[record["suite"]](record["inputs"])
    return float(slack), bool(side_ok)


def run_suite(suite: str, trials: int, seed: int, n: int) -> dict:
    records = sorted((run_trial(suite, seed, i, n) for i in range(trials)), key=lambda r: r.trial)
    failures = [r.to_json(with_inputs=True) for r in records if not r.ok]
    return {
        "suite": suite,
        "trials": trials,
        "seed": seed,
        "n": n,
        "tolerance": TOL[suite],
        "worst_slack": min(r.slack for r in records),
        "failures": len(failures),
        "failure_records": failures,
    }
