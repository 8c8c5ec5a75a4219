import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scipy.special import logsumexp

from excessnoise import thermal
from excessnoise.errors import Divergent, DomainError


def log_geometric(n, size=4000):
    k = np.arange(size, dtype=float)
    if n == 0:
        return np.where(k == 0, 0.0, -np.inf)
    return k * (np.log(n) - np.log1p(n)) - np.log1p(n)


def classical(n1, n2):
    lp, lq = log_geometric(n1), log_geometric(n2)
    keep = np.isfinite(lp)
    p = np.exp(lp[keep])
    lr = lp[keep] - lq[keep]
    d = np.sum(p * lr)
    v = np.sum(p * lr**2) - d**2
    f = np.exp(2 * logsumexp(0.5 * (lp + lq)))
    return d, v, f


@pytest.mark.parametrize("n1,n2", [(0.2, 0.5), (1.0, 2.0), (3.0, 0.1), (0.0, 0.7)])
def test_closed_forms_match_geometric_sums(n1, n2):
    d, v, f = classical(n1, n2)
    assert np.isclose(thermal.relative_entropy(n1, n2), d, rtol=1e-10, atol=1e-13)
    assert np.isclose(thermal.relative_entropy_variance(n1, n2), v, rtol=1e-8, atol=1e-12)
    assert np.isclose(thermal.fidelity(n1, n2), f, rtol=1e-10)


def test_fidelity_for_one_and_two_photons():
    assert np.isclose(thermal.fidelity(1.0, 2.0), (math.sqrt(6) - math.sqrt(2)) ** -2)
    assert np.isclose(thermal.fidelity(1.0, 2.0), 0.9330127018922193)


def test_entropy_of_thermal_state():
    assert thermal.thermal_entropy(0.0) == 0.0
    n = 1.7
    assert np.isclose(thermal.thermal_entropy(n), (n + 1) * np.log(n + 1) - n * np.log(n))


def test_g_domain():
    assert thermal.g(0.0, 0.0) == 0.0
    with pytest.raises(DomainError):
        thermal.g(1.0, 0.0)
    with pytest.raises(DomainError):
        thermal.g(-1.0, 1.0)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 2.0, 3.5])
def test_renyi_matches_geometric_sum(alpha):
    n1, n2 = 0.4, 0.9
    lp, lq = log_geometric(n1), log_geometric(n2)
    expected = logsumexp(alpha * lp + (1 - alpha) * lq) / (alpha - 1)
    assert np.isclose(thermal.renyi_thermal(alpha, n1, n2), expected, rtol=1e-10)


def test_renyi_tends_to_relative_entropy():
    d = thermal.relative_entropy(0.4, 0.9)
    assert np.isclose(thermal.renyi_thermal(1 + 1e-6, 0.4, 0.9), d, rtol=1e-5)


def test_renyi_divergence_detected():
    # r = (n1/(n1+1))^a (n2/(n2+1))^(1-a) exceeds one for large alpha when n1 > n2
    with pytest.raises(Divergent):
        thermal.renyi_thermal(20.0, 5.0, 0.01)
    with pytest.raises(Divergent):
        thermal.renyi_thermal(2.0, 1.0, 0.0)


def test_qfi_thermal():
    assert thermal.qfi_thermal(1.0) == 0.5
    with pytest.raises(DomainError):
        thermal.qfi_thermal(0.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 20.0), st.floats(1e-3, 20.0))
def test_divergence_properties(n1, n2):
    d = thermal.relative_entropy(n1, n2)
    f = thermal.fidelity(n1, n2)
    assert d >= -1e-12
    assert 0.0 <= f <= 1.0 + 1e-12
    # relative entropy dominates -ln F
    assert d >= -math.log(f) - 1e-10
    assert thermal.relative_entropy_variance(n1, n2) >= 0.0


def test_g_examples():
    assert np.isclose(thermal.g(1, 1), 2 * np.log(2))
    assert np.isclose(thermal.g(1, 2), 2 * np.log(3) - np.log(2))


def test_thermal_pair_examples():
    report = thermal.thermal_divergences(thermal.ThermalPair(1.0, 2.0))
    assert np.isclose(report.d, np.log(9 / 8))
    assert np.isclose(report.v, 2 * np.log(4 / 3) ** 2)
    same = thermal.thermal_divergences(thermal.ThermalPair(0.7, 0.7))
    assert (same.d, same.v, same.f) == (0.0, 0.0, 1.0)
    assert np.isclose(thermal.thermal_divergences(0.0, 1.0).f, 0.5)
    assert np.isclose(thermal.renyi_thermal(0.5, thermal.ThermalPair(0.0, 1.0)), np.log(2))
    with pytest.raises(DomainError):
        thermal.ThermalPair(-0.1, 1.0)
    with pytest.raises(TypeError):
        thermal.thermal_divergences(thermal.ThermalPair(1.0, 2.0), 2.0)


def test_relative_entropy_at_zero_first_mean():
    assert np.isclose(thermal.relative_entropy(0.0, 1.5), np.log(2.5))


def test_qfi_thermal_examples():
    assert np.isclose(thermal.qfi_thermal(0.5), 4 / 3)
    values = [thermal.qfi_thermal(n) for n in (0.1, 1.0, 10.0)]
    assert values[0] > values[1] > values[2]


GRID = np.linspace(0.0, 5.0, 20)


def test_relative_entropy_positive_off_diagonal():
    for n1 in GRID:
        for n2 in GRID[1:]:
            d = thermal.relative_entropy(n1, n2)
            if n1 == n2:
                assert d == 0.0
            else:
                assert d > 0.0


def test_half_renyi_is_minus_log_fidelity():
    for n1 in GRID:
        for n2 in GRID[1:]:
            assert np.isclose(thermal.renyi_thermal(0.5, n1, n2), -np.log(thermal.fidelity(n1, n2)), rtol=1e-9, atol=1e-14)
