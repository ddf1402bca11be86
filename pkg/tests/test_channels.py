import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qentropy import channels
from qentropy.channels import (
    Compose,
    Kraus,
    Measurement,
    PartialTrace,
    Pinching,
    Transpose,
    apply_map,
    classical_mutual_information,
    dpi_check,
    holevo_dpi_check,
    tr_monotonicity_check,
    validate_map,
)
from qentropy.errors import DimensionMismatch, MalformedSpec, MapNotTracePreservingOnRho
from qentropy.linalg import random_density, random_hermitian, tr_signed

LOG2 = math.log(2)
seeds = st.integers(0, 2**32 - 1)
BASIS2 = Measurement((np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))


def _diag_measurement(n):
    return Measurement(tuple(np.diag(np.eye(n)[i]) for i in range(n)))


def test_transpose_example():
    a = np.array([[0, 1j], [-1j, 0]])
    np.testing.assert_array_equal(apply_map(Transpose(), a), [[0, -1j], [1j, 0]])


def test_measurement_extracts_diagonal():
    a = random_hermitian(2, seed=1)
    np.testing.assert_allclose(apply_map(BASIS2, a), np.diag(np.diag(a).real), atol=1e-15)


def test_partial_trace_of_product():
    ra, rb = random_density(2, seed=1), random_density(3, seed=2)
    np.testing.assert_allclose(apply_map(PartialTrace((2, 3), "B"), np.kron(ra, rb)), ra, atol=1e-15)
    np.testing.assert_allclose(apply_map(PartialTrace((2, 3), "A"), np.kron(ra, rb)), rb, atol=1e-15)


def test_pinching_and_kraus():
    a = random_hermitian(3, seed=3)
    p = Pinching((np.diag([1.0, 1.0, 0.0]), np.diag([0.0, 0.0, 1.0])))
    out = apply_map(p, a)
    assert out[0, 2] == 0 and out[1, 2] == 0 and out[0, 1] == a[0, 1]
    k = Kraus((np.eye(3),))
    np.testing.assert_allclose(apply_map(k, a), a)


def test_compose_left_to_right():
    m = Compose((Transpose(), PartialTrace((2, 2), "B")))
    a = random_hermitian(4, seed=5)
    np.testing.assert_allclose(apply_map(m, a), apply_map(PartialTrace((2, 2), "B"), a.T))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        apply_map(BASIS2, np.eye(3))


def test_malformed_specs():
    with pytest.raises(MalformedSpec):
        Pinching((np.diag([1.0, 0.0]),))
    with pytest.raises(MalformedSpec):
        PartialTrace((2,), "B")
    with pytest.raises(MalformedSpec):
        Compose(())
    with pytest.raises(MalformedSpec):
        Kraus((np.eye(2), np.eye(3)))


def test_validate_map_examples():
    assert validate_map(Measurement((np.eye(2) / 2, np.eye(2) / 2))).trace_preserving
    v = validate_map(Kraus((np.diag([1.0, 0.5]),)))
    assert v.trace_nonincreasing and not v.trace_preserving
    assert not validate_map(Measurement((np.eye(2), np.eye(2)))).trace_nonincreasing
    assert validate_map(Transpose()).trace_preserving


@pytest.mark.parametrize("tag", channels.MAP_TAGS)
def test_random_maps_are_trace_preserving(tag):
    m = channels.random_map(tag, 4, seed=3)
    assert validate_map(m).trace_preserving
    rho = random_density(4, seed=4)
    assert np.trace(apply_map(m, rho)).real == pytest.approx(1.0, abs=1e-12)


def test_monotonicity_psdh_input():
    rho = 3 * random_density(3, seed=1)
    res = tr_monotonicity_check(channels.random_povm(3, 3, seed=2), rho)
    assert res.plus_defect == pytest.approx(0.0, abs=1e-13) and res.minus_defect == 0.0


def test_monotonicity_classical_equality():
    a = np.diag([1.5, -0.5, 0.25, -2.0])
    res = tr_monotonicity_check(_diag_measurement(4), a)
    assert res.ok and res.equality
    assert abs(res.plus_defect) <= 1e-10 and abs(res.minus_defect) <= 1e-10


def test_monotonicity_random_povm():
    a = random_hermitian(4, seed=6)
    res = tr_monotonicity_check(channels.random_povm(4, 3, seed=7), a)
    assert res.ok and res.plus_defect >= -1e-10 and res.minus_defect >= -1e-10
    assert not res.equality


@given(seed=seeds, tag=st.sampled_from(channels.MAP_TAGS), n=st.sampled_from([2, 3, 4, 6]))
def test_monotonicity_property(seed, tag, n):
    rng = np.random.default_rng(seed)
    res = tr_monotonicity_check(channels.random_map(tag, n, rng), random_hermitian(n, rng, scale=2.0))
    assert res.plus_defect >= -1e-10 and res.minus_defect >= -1e-10


@given(seed=seeds, n=st.integers(2, 5))
def test_measurement_output_classical(seed, n):
    rng = np.random.default_rng(seed)
    out = apply_map(channels.random_povm(n, 3, rng), random_hermitian(n, rng))
    assert np.count_nonzero(out - np.diag(np.diag(out))) == 0
    d = np.diag(out).real
    assert tr_signed(out) == pytest.approx((d[d > 0].sum(), -d[d < 0].sum()), abs=1e-15)


def test_dpi_transpose_equality():
    rho, sigma = random_density(3, seed=1), random_density(3, seed=2)
    rep = dpi_check(Transpose(), rho, sigma)
    assert abs(rep.slack) <= 1e-10 and rep.satisfied()


def test_dpi_classical_diagonal():
    rho, sigma = np.diag([0.2, 0.8]), np.diag([0.6, 0.4])
    rep = dpi_check(BASIS2, rho, sigma)
    assert abs(rep.slack) <= 1e-10
    assert rep.equality_evidence()


def test_dpi_partial_trace_bipartite():
    rho, sigma = random_density(4, seed=3), random_density(4, seed=4)
    rep = dpi_check(PartialTrace((2, 2), "B"), rho, sigma)
    assert rep.slack >= -1e-8
    assert not rep.equality_evidence()


def test_dpi_infinite_rhs():
    rep = dpi_check(BASIS2, np.diag([0.5, 0.5]), np.diag([1.0, 0.0]))
    assert rep.slack is None and rep.satisfied() and not rep.rhs.finite


def test_dpi_requires_trace_preservation_on_rho():
    with pytest.raises(MapNotTracePreservingOnRho):
        dpi_check(Kraus((np.diag([1.0, 0.5]),)), np.eye(2) / 2, np.eye(2) / 2)


def test_equality_diagnostic_fields():
    rho, sigma = random_density(3, seed=5), random_density(3, seed=6)
    rep = dpi_check(channels.random_povm(3, 2, seed=7), rho, sigma)
    assert [s.t for s in rep.equality_diagnostic] == list(channels.DEFAULT_GRID)
    for s in rep.equality_diagnostic:
        assert s.defect_minus >= -1e-10 and s.defect_plus >= -1e-10 and s.cross_norm >= 0


def test_equality_sign_convention():
    # a sample with t < 0 is judged on its positive part only
    sample = channels.EqualitySample(t=-1.0, cross_norm=0.0, defect_minus=1.0, defect_plus=0.0)
    rep = channels.DpiReport(None, None, 0.0, (sample,))
    assert rep.equality_evidence()
    sample = channels.EqualitySample(t=1.0, cross_norm=0.0, defect_minus=1.0, defect_plus=0.0)
    assert not channels.DpiReport(None, None, 0.0, (sample,)).equality_evidence()


@given(seed=seeds, tag=st.sampled_from(["transpose", "compose"]), n=st.integers(2, 4))
def test_dpi_non_cp_property(seed, tag, n):
    rng = np.random.default_rng(seed)
    rep = dpi_check(channels.random_map(tag, n, rng), random_density(n, seed=rng), random_density(n, seed=rng), grid=())
    assert rep.slack >= -1e-8


@pytest.mark.parametrize("tag", ["measurement", "kraus", "pinching", "partial_trace", "compose"])
def test_dpi_integral_route(tag):
    rng = np.random.default_rng(12)
    m = channels.random_map(tag, 4, rng)
    rho, sigma = random_density(4, seed=rng), random_density(4, seed=rng)
    ref = dpi_check(m, rho, sigma, grid=())
    integ = dpi_check(m, rho, sigma, grid=(), method="integral")
    assert integ.lhs.value == pytest.approx(ref.lhs.value, abs=1e-6)
    assert integ.rhs.value == pytest.approx(ref.rhs.value, abs=1e-6)


def test_holevo_equal_states():
    rho = random_density(3, seed=1)
    rep = holevo_dpi_check(channels.random_povm(3, 2, seed=2), [rho, rho], [0.5, 0.5])
    assert rep.slack == pytest.approx(0.0, abs=1e-14)


def test_holevo_orthogonal_pure_states():
    rep = holevo_dpi_check(BASIS2, [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])], [0.5, 0.5])
    assert abs(rep.slack) <= 1e-9
    assert rep.lhs.value == pytest.approx(LOG2, abs=1e-12)


def test_holevo_three_states_mutual_information():
    rng = np.random.default_rng(3)
    states = [random_density(3, seed=rng) for _ in range(3)]
    w = [0.2, 0.5, 0.3]
    povm = channels.random_povm(3, 4, rng)
    rep = holevo_dpi_check(povm, states, w)
    assert rep.slack >= -1e-8
    assert rep.lhs.value == pytest.approx(classical_mutual_information(povm.povm, states, w), abs=1e-10)
    assert {s.pair for s in rep.equality_diagnostic} == {(0, 1), (0, 2), (1, 2)}


def test_classical_mutual_information_perfect_channel():
    assert classical_mutual_information(BASIS2.povm, [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])], [0.5, 0.5]) == (
        pytest.approx(LOG2)
    )
