import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qentropy.entropy import (
    EntropyValue,
    binary_entropy,
    holevo_chi,
    kl_divergence,
    relative_entropy_spectral,
    von_neumann_entropy,
)
from qentropy.errors import DimensionMismatch, DomainError, WeightError
from qentropy.linalg import random_density, random_hermitian, spectrum
from qentropy.pencil import Form, Pencil

LOG2 = math.log(2)
seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 5)


def test_entropy_examples():
    assert von_neumann_entropy(np.diag([0.5, 0.5])) == pytest.approx(LOG2, abs=1e-15)
    v = np.array([[1.0], [1.0j]]) / math.sqrt(2)
    assert von_neumann_entropy(v @ v.conj().T) == pytest.approx(0.0, abs=1e-15)
    assert von_neumann_entropy(np.diag([0.25, 0.75])) == pytest.approx(0.5623351446188083, abs=1e-15)


def test_relative_entropy_examples():
    rho = random_density(4, seed=3)
    assert relative_entropy_spectral(rho, rho).value == pytest.approx(0.0, abs=1e-14)
    assert relative_entropy_spectral(np.diag([1.0, 0.0]), np.diag([0.5, 0.5])).value == pytest.approx(LOG2, abs=1e-15)
    expected = 0.5 * math.log(2) + 0.5 * math.log(2 / 3)
    got = relative_entropy_spectral(np.diag([0.5, 0.5]), np.diag([0.25, 0.75])).value
    assert got == pytest.approx(expected, abs=1e-15)
    assert got == pytest.approx(0.1438410, abs=1e-7)


def test_relative_entropy_infinite_outside_support():
    d = relative_entropy_spectral(np.diag([0.5, 0.5]), np.diag([1.0, 0.0]))
    assert not d.finite
    assert d.as_float() == math.inf
    assert d.to_json() == {"value": None, "infinite": True}


def test_relative_entropy_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        relative_entropy_spectral(np.eye(2) / 2, np.eye(3) / 3)


def test_binary_entropy_examples():
    assert binary_entropy(0.5) == LOG2
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.25) == pytest.approx(von_neumann_entropy(np.diag([0.25, 0.75])), abs=1e-15)
    assert binary_entropy(1 + 5e-13) == 0.0
    with pytest.raises(DomainError):
        binary_entropy(1.1)
    with pytest.raises(DomainError):
        binary_entropy(-1e-9)


def test_holevo_examples():
    rho = random_density(3, seed=8)
    assert holevo_chi([rho, rho, rho], [0.2, 0.3, 0.5]) == pytest.approx(0.0, abs=1e-14)
    assert holevo_chi([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])], [0.5, 0.5]) == pytest.approx(LOG2, abs=1e-15)


def test_holevo_as_average_relative_entropy():
    r0, r1 = random_density(4, seed=1), random_density(4, seed=2)
    q = (0.3, 0.7)
    mix = q[0] * r0 + q[1] * r1
    oracle = q[0] * relative_entropy_spectral(r0, mix).value + q[1] * relative_entropy_spectral(r1, mix).value
    assert holevo_chi([r0, r1], q) == pytest.approx(oracle, abs=1e-13)


def test_holevo_weight_errors():
    r = np.eye(2) / 2
    with pytest.raises(WeightError):
        holevo_chi([r, r], [0.5, 0.6])
    with pytest.raises(WeightError):
        holevo_chi([r, r], [1.0])


def test_kl_divergence():
    assert kl_divergence([1, 0], [0.5, 0.5]).value == pytest.approx(LOG2)
    assert not kl_divergence([0.5, 0.5], [1, 0]).finite
    assert kl_divergence([0, 1], [0, 1]).value == 0.0


def test_entropy_value_default_finite():
    assert EntropyValue(1.5).as_float() == 1.5


def test_shift_limit_single_pair():
    rho, sigma = 2.0 * random_density(3, seed=4), random_density(3, seed=5)
    target = np.trace(rho - sigma).real
    gaps = [abs(relative_entropy_spectral(rho + r * np.eye(3), sigma + r * np.eye(3)).value - target)
            for r in (10.0, 1e2, 1e3, 1e4)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] <= 1e-3


@given(n=dims, seed=seeds, frac=st.floats(0.05, 0.95))
def test_symmetrized_sum_identity(n, seed, frac):
    rng = np.random.default_rng(seed)
    rho = random_density(n, seed=rng)
    sigma = random_hermitian(n, rng)
    t = frac * Pencil(rho, sigma, Form.RAY).positivity_window().radius
    a, b = rho + t * sigma, rho - t * sigma
    lhs = 2 * von_neumann_entropy(rho) - von_neumann_entropy(a) - von_neumann_entropy(b)
    rhs = relative_entropy_spectral(a, rho).value + relative_entropy_spectral(b, rho).value
    assert lhs == pytest.approx(rhs, abs=1e-9)


@given(n=dims, seed=seeds, c=st.floats(0.1, 1.0))
def test_nonnegative_when_trace_dominates(n, seed, c):
    rng = np.random.default_rng(seed)
    rho, sigma = random_density(n, seed=rng), c * random_density(n, seed=rng)
    assert relative_entropy_spectral(rho, sigma).value >= -1e-10


@given(n=dims, seed=seeds, lam=st.floats(0, 1))
def test_joint_convexity(n, seed, lam):
    rng = np.random.default_rng(seed)
    r1, r2, s1, s2 = (random_density(n, seed=rng) for _ in range(4))
    mixed = relative_entropy_spectral(lam * r1 + (1 - lam) * r2, lam * s1 + (1 - lam) * s2).value
    chord = lam * relative_entropy_spectral(r1, s1).value + (1 - lam) * relative_entropy_spectral(r2, s2).value
    assert mixed <= chord + 1e-9


@given(n=dims, seed=seeds, count=st.integers(1, 4))
def test_holevo_nonnegative(n, seed, count):
    rng = np.random.default_rng(seed)
    states = [random_density(n, rank=int(rng.integers(1, n + 1)), seed=rng) for _ in range(count)]
    w = rng.dirichlet(np.ones(count))
    w[-1] = 1.0 - w[:-1].sum()
    assert holevo_chi(states, w) >= -1e-10


@given(n=dims, seed=seeds)
def test_entropy_bounded_by_log_dim(n, seed):
    rho = random_density(n, seed=seed)
    assert -1e-14 <= von_neumann_entropy(rho) <= math.log(n) + 1e-12
    assert spectrum(rho)[0] >= 0
