import numpy as np
import pytest
from hypothesis import given, strategies as st

from zalmsim import (Biphoton, ChannelPlan, EfficiencyBudget, SourceParams, bsm_fidelity_and_error,
                     bsm_herald_probability, bsm_heralding_efficiency, bsm_purity, channel_rate,
                     channelize, cross_channel_probability, decompose, guard_band_channels,
                     heralding_probability, interference_ratio, joint_probability,
                     purity_from_schmidt, total_rate, two_pair_probability)
from zalmsim.errors import DegenerateInputError

import oracles

OM = oracles.OMEGA_PM
PLAN = ChannelPlan(25e9, 30e9, 81)
ONE = EfficiencyBudget()

unit = st.floats(0.01, 1.0)


def test_unit_rate():
    assert channel_rate(ONE, 1, 1, 1, 1, 1) == 1.0


@pytest.mark.parametrize("field,power", [("eta_qtx", 1), ("eta_prop", 2), ("eta_qrx", 2)])
def test_rate_scaling(field, power):
    b = EfficiencyBudget(**{field: 0.5})
    assert channel_rate(b, 0.3, 0.4, 0.9, 0.8, 0.7) == pytest.approx(
        0.5 ** power * channel_rate(ONE, 0.3, 0.4, 0.9, 0.8, 0.7), rel=1e-15)


def test_budget_validation():
    with pytest.raises(ValueError):
        EfficiencyBudget(eta_qtx=0.0)
    with pytest.raises(ValueError):
        EfficiencyBudget(eta_prop=1.5)
    with pytest.raises(ValueError):
        EfficiencyBudget(E_Np=0.0)


def test_case2_channel0_composition():
    psi = Biphoton.gaussian(SourceParams(16e-12, OM))
    pi = heralding_probability(psi, 0, PLAN)
    pj = joint_probability(psi, 0, PLAN)
    p = purity_from_schmidt(decompose(channelize(psi, 0, PLAN)))
    prc, _ = bsm_fidelity_and_error(bsm_purity(p))
    herald, eff = bsm_herald_probability(pi), bsm_heralding_efficiency(pj, pi)
    assert channel_rate(ONE, herald, eff, 1.0, prc, prc) == pytest.approx(herald * eff * prc, rel=1e-15)


@given(e=st.floats(0.1, 3), h=unit, p=unit, c=unit, fa=unit, fb=unit, q=unit)
def test_rate_bounded_by_herald(e, h, p, c, fa, fb, q):
    b = EfficiencyBudget(q, q, q, e)
    assert channel_rate(b, h, p, c, fa, fb) <= e * h


def test_total_rate():
    assert total_rate({3: 0.25}) == 0.25
    assert total_rate({0: 1.0, 1: 2.0, 2: 4.0}, [0, 2]) == 5.0
    assert total_rate([0.1] * 10) == 1.0  # compensated summation


def test_guard_band_counts():
    assert len(guard_band_channels(PLAN, 1)) == 81
    two, three = guard_band_channels(PLAN, 2), guard_band_channels(PLAN, 3)
    assert len(two) == 41 and len(three) == 27
    assert 0 in two and 0 in three
    assert three[0] == -39 and three[-1] == 39
    with pytest.raises(ValueError):
        guard_band_channels(PLAN, 0)


@pytest.fixture(scope="module")
def psi1():
    return Biphoton.gaussian(SourceParams(160e-12, OM))


@pytest.fixture(scope="module")
def psi2():
    return Biphoton.gaussian(SourceParams(16e-12, OM))


def test_cross_channel_diagonal(psi2):
    assert cross_channel_probability(psi2, 6, 6, PLAN) == joint_probability(psi2, 6, PLAN)


def test_cross_channel_far_is_negligible(psi1):
    assert cross_channel_probability(psi1, 5, 0, PLAN) < 1e-6


def test_cross_channel_subadditive(psi2):
    n = 2
    total = sum(cross_channel_probability(psi2, m, n, PLAN, 65) for m in range(n - 6, n + 7))
    assert total <= heralding_probability(psi2, n, PLAN)


def test_interference_ordering(psi1, psi2):
    assert interference_ratio(psi1, 0, 1, PLAN) < 1e-3 * interference_ratio(psi2, 0, 1, PLAN)
    for n in (-40, -3, 0, 25, 37):
        c1 = interference_ratio(psi2, n, 1, PLAN)
        c2 = interference_ratio(psi2, n, 2, PLAN)
        assert c2 < c1 < 1


def test_interference_narrow_channel_limit():
    plan = ChannelPlan(0.1e9, 30e9, 81)
    psi = Biphoton.gaussian(SourceParams(16e-12, OM))
    for n in (0, 10):
        ref = oracles.chi1_narrow(16e-12, OM, n)
        assert interference_ratio(psi, n, 1, plan, 65) == pytest.approx(ref, rel=1e-3)


def test_interference_tilt_follows_phase_matching(psi2):
    # pump factor is identical for every n; the phase-matching factor adds exp(-32 n w^2 / Om^2)
    w = 2 * np.pi * 30e9
    c0 = interference_ratio(psi2, 0, 1, PLAN)
    for n in (-35, -20, 12, 35):
        ratio = interference_ratio(psi2, n, 1, PLAN) / c0
        assert ratio == pytest.approx(np.exp(-32 * n * w ** 2 / OM ** 2), rel=2e-3)


def test_interference_flat_near_centre(psi2):
    chi = [interference_ratio(psi2, n, 1, PLAN) for n in range(-14, 15, 4)]
    assert (max(chi) - min(chi)) / np.mean(chi) < 0.02


def test_interference_degenerate():
    psi = Biphoton(lambda s, i: 0.0 * s * i, SourceParams(16e-12, OM))
    with pytest.raises(DegenerateInputError):
        interference_ratio(psi, 0, 1, PLAN)


def test_two_pair():
    assert two_pair_probability(1.0) == pytest.approx(0.1839, abs=5e-5)
    assert two_pair_probability(2.0) == pytest.approx(0.2707, abs=5e-5)
    assert two_pair_probability(1.0) == pytest.approx(oracles.two_pair_poisson(1.0), rel=1e-15)
    assert two_pair_probability(1.0, "thermal") == pytest.approx(1 / 8)
    assert two_pair_probability(1.0, "off") == 0.0
    with pytest.raises(ValueError):
        two_pair_probability(1.0, "binomial")
    with pytest.raises(ValueError):
        two_pair_probability(0.0)


@given(mu=st.floats(1e-6, 1e-3))
def test_two_pair_quadratic(mu):
    assert two_pair_probability(mu) / mu ** 2 == pytest.approx(0.5, rel=2e-3)
