import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from excessnoise import thermal
from excessnoise.channels import ChannelSpec, probe_output, thermal_state, tmsv
from excessnoise.divergences import (
    divergences,
    entropy,
    fidelity,
    qfi_finite_difference,
    relative_entropy,
    relative_entropy_variance,
)
from excessnoise.errors import DimensionMismatch, DomainError, SecondArgumentPure, StepTooLarge
from excessnoise.gaussian import GaussianState, apply_symplectic, direct_sum, marginal
from tests.test_gaussian import random_symplectic
from excessnoise.gaussian import SymplecticMatrix


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 10.0), st.floats(0.01, 10.0))
def test_single_mode_matches_closed_forms(n1, n2):
    report = divergences(thermal_state(n1), thermal_state(n2))
    exact = thermal.thermal_divergences(n1, n2)
    assert np.isclose(report.d, exact.d, rtol=1e-9, atol=1e-12)
    # occupations below the purity threshold count as vacuum; V ~ n ln(1/n)^2 is then ~1e-9
    assert np.isclose(report.v, exact.v, rtol=1e-8, atol=1e-8)
    # F depends on sqrt(n1); a covariance entry 1/2 + n1 resolves n1 only to ~1e-16
    assert np.isclose(report.f, exact.f, rtol=1e-10, atol=3e-8)


def test_product_states_are_additive():
    a = direct_sum(thermal_state(0.3), thermal_state(1.2))
    b = direct_sum(thermal_state(0.8), thermal_state(0.4))
    d = thermal.relative_entropy(0.3, 0.8) + thermal.relative_entropy(1.2, 0.4)
    v = thermal.relative_entropy_variance(0.3, 0.8) + thermal.relative_entropy_variance(1.2, 0.4)
    f = thermal.fidelity(0.3, 0.8) * thermal.fidelity(1.2, 0.4)
    assert np.isclose(relative_entropy(a, b), d)
    assert np.isclose(relative_entropy_variance(a, b), v)
    assert np.isclose(fidelity(a, b), f)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_invariant_under_common_symplectic(seed):
    rng = np.random.default_rng(seed)
    a = direct_sum(thermal_state(rng.uniform(0, 2)), thermal_state(rng.uniform(0, 2)))
    b = direct_sum(thermal_state(rng.uniform(0.1, 2)), thermal_state(rng.uniform(0.1, 2)))
    s = SymplecticMatrix(random_symplectic(rng, 2, 0.5))
    before, after = divergences(a, b), divergences(apply_symplectic(s, a), apply_symplectic(s, b))
    assert np.isclose(before.d, after.d, rtol=1e-7, atol=1e-10)
    assert np.isclose(before.v, after.v, rtol=1e-6, atol=1e-10)
    assert np.isclose(before.f, after.f, rtol=1e-8)


def test_entropy_of_tmsv_arm():
    assert entropy(tmsv(2.0)) < 1e-9
    assert np.isclose(entropy(marginal(tmsv(2.0), [1])), thermal.thermal_entropy(2.0))


def test_identical_states():
    state = probe_output(ChannelSpec.thermal(0.4, 0.3), 5.0)
    assert relative_entropy(state, state) < 1e-10
    assert relative_entropy_variance(state, state) < 1e-10
    assert fidelity(state, state) == 1.0


def test_fidelity_symmetric_and_bounded():
    a = probe_output(ChannelSpec.thermal(0.4, 0.3), 5.0)
    b = probe_output(ChannelSpec.thermal(0.4, 0.9), 5.0)
    assert np.isclose(fidelity(a, b), fidelity(b, a), rtol=1e-12)
    assert 0 < fidelity(a, b) < 1


def test_fidelity_with_pure_state():
    # overlap of vacuum with a thermal state is its vacuum population
    assert np.isclose(fidelity(thermal_state(0.0), thermal_state(1.5)), 1 / 2.5)


def test_pure_second_argument_rejected():
    with pytest.raises(SecondArgumentPure):
        relative_entropy(thermal_state(0.2), thermal_state(0.0))
    with pytest.raises(SecondArgumentPure):
        relative_entropy(tmsv(0.1), tmsv(0.2))


def test_variance_with_pure_first_state():
    # vacuum against thermal: ln rho_1 - ln rho_2 is constant on the vacuum
    assert relative_entropy_variance(thermal_state(0.0), thermal_state(0.4)) < 1e-14
    # variance of a pure TMSV against a noisy output is finite and positive
    noisy = probe_output(ChannelSpec.thermal(0.5, 0.2), 1.0)
    assert relative_entropy_variance(tmsv(1.0), noisy) > 0


def test_mode_count_mismatch():
    with pytest.raises(DimensionMismatch):
        relative_entropy(thermal_state(0.1), tmsv(0.1))


def test_fidelity_stays_accurate_at_high_squeezing():
    n_s = 1e6
    a = probe_output(ChannelSpec.thermal(0.5, 0.1), n_s)
    b = probe_output(ChannelSpec.thermal(0.5, 0.3), n_s)
    # gap to the thermal limit shrinks like 1/n_s
    assert abs(fidelity(a, b) - thermal.fidelity(0.1, 0.3)) < 1e-6


def test_qfi_of_thermal_family():
    est = qfi_finite_difference(thermal_state, 1.0)
    assert np.isclose(est.value, 0.5, rtol=1e-6)
    assert np.isclose(est.sqrt_fidelity, est.log_fidelity, rtol=1e-3)


def test_qfi_of_constant_family_is_zero():
    est = qfi_finite_difference(lambda x: thermal_state(0.7), 1.0)
    assert est.value == 0.0


def test_qfi_step_too_large():
    with pytest.raises(StepTooLarge):
        qfi_finite_difference(thermal_state, 0.5, delta=0.99)
    with pytest.raises(DomainError):
        qfi_finite_difference(thermal_state, 0.5, delta=-1.0)


def test_spec_examples():
    assert np.isclose(entropy(thermal_state(1.0)), 2 * np.log(2))
    assert entropy(thermal_state(0.0)) == 0.0
    assert np.isclose(relative_entropy(thermal_state(1.0), thermal_state(2.0)), np.log(9 / 8))
    assert np.isclose(relative_entropy_variance(thermal_state(1.0), thermal_state(2.0)), 2 * np.log(4 / 3) ** 2)
    assert np.isclose(fidelity(thermal_state(0.0), thermal_state(1.0)), 0.5)
    assert np.isclose(fidelity(tmsv(3.0), tmsv(3.0)), 1.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_pure_state_fidelity_identity(seed):
    rng = np.random.default_rng(seed)
    vac = 0.5 * np.eye(4)
    s1, s2 = (random_symplectic(rng, 2, 0.4) for _ in range(2))
    v1, v2 = s1 @ vac @ s1.T, s2 @ vac @ s2.T
    expected = np.linalg.det(v1 + v2) ** -0.5
    assert np.isclose(fidelity(GaussianState(v1), GaussianState(v2)), expected, rtol=1e-8)


def test_tensoring_common_thermal_factor():
    a = probe_output(ChannelSpec.thermal(0.6, 0.1), 3.0)
    b = probe_output(ChannelSpec.thermal(0.6, 0.4), 3.0)
    extra = thermal_state(0.8)
    before, after = divergences(a, b), divergences(direct_sum(a, extra), direct_sum(b, extra))
    assert abs(before.d - after.d) < 1e-9
    assert abs(before.f - after.f) < 1e-9


def test_estimator_spread_shrinks_with_step():
    spreads = []
    for delta in (0.1, 0.05, 0.025, 0.0125):
        est = qfi_finite_difference(thermal_state, 1.0, delta=delta)
        spreads.append(abs(est.sqrt_fidelity - est.log_fidelity))
    # at least linear in delta; central differences give quadratic
    assert all(a / b > 2 for a, b in zip(spreads, spreads[1:]))


def test_thermal_family_qfi_at_small_step():
    est = qfi_finite_difference(thermal_state, 1.0, delta=1e-4)
    assert abs(est.value - 0.5) / 0.5 < 1e-3


def test_accuracy_degrades_gracefully_at_extreme_squeezing():
    limit = thermal.thermal_divergences(0.1, 0.3)
    for n_s in (1e7, 1e8):
        r = divergences(probe_output(ChannelSpec.thermal(0.5, 0.1), n_s), probe_output(ChannelSpec.thermal(0.5, 0.3), n_s))
        assert abs(r.d - limit.d) < 1e-7 and abs(r.f - limit.f) < 1e-7
