import math

import numpy as np
import pytest

from relaydelay.channel import Network, cascade_snr
from relaydelay.errors import ChannelDomainError, PartitionError
from relaydelay.exponent import (
    ReliabilityBudget,
    codelength_at,
    delay_bound,
    df_chain_delay,
    golden_section_minimize,
    optimize_rho,
    random_coding_exponent,
    validate_segments,
)


def test_exponent_values():
    assert random_coding_exponent(5.0, 0.3, 0.0) == 0.0
    assert random_coding_exponent(3.0, 0.0, 1.0) == pytest.approx(math.log(2.5))
    assert random_coding_exponent(3.0, math.log(2.5), 1.0) == pytest.approx(0.0, abs=1e-12)


def test_exponent_domain():
    with pytest.raises(ChannelDomainError):
        random_coding_exponent(0.0, 0.1, 0.5)
    with pytest.raises(ChannelDomainError):
        random_coding_exponent(1.0, -0.1, 0.5)
    with pytest.raises(ChannelDomainError):
        random_coding_exponent(1.0, 0.1, 1.5)


def test_budget():
    budget = ReliabilityBudget(bits=1000, delta_e=1e-6)
    assert budget.nats == pytest.approx(1000 * math.log(2))
    assert budget.split(4) == pytest.approx(2.5e-7)
    with pytest.raises(ChannelDomainError):
        ReliabilityBudget(bits=0, delta_e=0.1)
    with pytest.raises(ChannelDomainError):
        ReliabilityBudget(bits=10, delta_e=1.0)
    with pytest.raises(ChannelDomainError):
        budget.split(0)


def test_golden_section_finds_parabola_minimum():
    x, fx = golden_section_minimize(lambda t: (t - 0.3) ** 2 + 1.0, 0.0, 1.0, tol=1e-12)
    assert x == pytest.approx(0.3, abs=1e-6)
    assert fx == pytest.approx(1.0)


def test_one_bit_example_beats_rho_one():
    budget = ReliabilityBudget(bits=1, delta_e=0.5)
    at_one = codelength_at(1.0, budget.nats, 0.5, 1.0)
    assert at_one == pytest.approx(2 * math.log(2) / math.log(1.5))
    assert at_one == pytest.approx(3.419, abs=1e-3)
    assert delay_bound(1.0, budget).codelength <= at_one


def test_optimizer_matches_or_beats_every_grid_point():
    nats = 1000 * math.log(2)
    for snr in (0.05, 0.5, 3.0, 100.0, 1e6):
        _, best = optimize_rho(snr, nats, 1e-6)
        dense = np.linspace(1e-6, 1.0, 5001)
        values = (dense * nats - math.log(1e-6)) / (dense * np.log1p(snr / (1.0 + dense)))
        assert best <= float(values.min()) * (1.0 + 1e-12)


def test_high_snr_small_message_limit():
    budget = ReliabilityBudget(bits=1, delta_e=1e-12)
    previous = math.inf
    for snr in (1e2, 1e4, 1e6, 1e8):
        bound = delay_bound(snr, budget)
        assert bound.rho == pytest.approx(1.0)
        assert bound.codelength < previous
        limit = -math.log(1e-12) / math.log1p(snr / 2.0)
        assert bound.codelength == pytest.approx(limit, rel=0.1)
        previous = bound.codelength


def test_delay_bound_monotonicity():
    budget = ReliabilityBudget(bits=1000, delta_e=1e-6)
    snrs = [0.1, 0.5, 1.0, 4.0, 20.0, 1e3]
    lengths = [delay_bound(s, budget).codelength for s in snrs]
    assert all(b < a for a, b in zip(lengths, lengths[1:]))

    doubled = ReliabilityBudget(bits=2000, delta_e=1e-6)
    assert delay_bound(2.0, doubled).codelength > delay_bound(2.0, budget).codelength

    assert delay_bound(2.0, budget, 1e-9).codelength > delay_bound(2.0, budget, 1e-6).codelength


def test_delay_bound_rejects_bad_snr():
    budget = ReliabilityBudget(bits=10, delta_e=0.01)
    with pytest.raises(ChannelDomainError):
        delay_bound(0.0, budget)
    with pytest.raises(ChannelDomainError):
        delay_bound(float("nan"), budget)


def test_df_chain_single_segment(budget):
    net = Network.symmetric(relays=3, power=5.0)
    expected = delay_bound(cascade_snr(net, 0, 3).equiv_snr, budget).codelength
    assert df_chain_delay(net, [(0, 3)], budget) == pytest.approx(expected, rel=1e-12)


def test_df_chain_all_df_symmetric(budget):
    net = Network.symmetric(relays=3, power=5.0)
    one = delay_bound(5.0, budget, budget.delta_e / 4).codelength
    assert df_chain_delay(net, [(0, 0), (1, 0), (2, 0), (3, 0)], budget) == pytest.approx(4 * one, rel=1e-12)


def test_df_chain_hand_summed(budget):
    net = Network.symmetric(relays=2, power=2.0).scaled_gains(1.5)
    segments = [(0, 1), (2, 0)]
    hand = sum(
        delay_bound(cascade_snr(net, s, k).equiv_snr, budget, budget.delta_e / 2).codelength
        for s, k in segments
    )
    assert df_chain_delay(net, segments, budget) == pytest.approx(hand, rel=1e-12)


def test_invalid_partitions():
    net = Network.symmetric(relays=3)
    with pytest.raises(PartitionError):
        validate_segments(net, [])
    with pytest.raises(PartitionError):
        validate_segments(net, [(0, 1), (3, 0)])
    with pytest.raises(PartitionError):
        validate_segments(net, [(0, 1), (2, 0)])
    with pytest.raises(PartitionError):
        validate_segments(net, [(1, 2)])
    validate_segments(net, [(0, 1), (2, 1)])


def test_codelength_closes_the_exponent_equation(rng):
    """n * E_r(snr, B/n, rho*) recovers -ln(delta)."""
    budget = ReliabilityBudget(bits=1000, delta_e=1e-6)
    for snr in 10.0 ** rng.uniform(-2.0, 4.0, size=50):
        bound = delay_bound(float(snr), budget)
        rate = budget.nats / bound.codelength
        recovered = bound.codelength * random_coding_exponent(bound.snr_used, rate, bound.rho)
        assert recovered == pytest.approx(-math.log(budget.delta_e), rel=1e-12)
