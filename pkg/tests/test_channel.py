import logging
import math
import unittest

import numpy as np
import pytest

from relaydelay.channel import (
    Hop,
    Network,
    amplification_gain,
    cascade_snr,
    cascade_snr_high_snr,
    per_hop_snr,
    relay_transmit_powers,
    segment_betas,
)
from relaydelay.errors import ChannelDomainError, SegmentIndexError


def random_network(rng, hops):
    gains = 10.0 ** rng.uniform(-1.0, 1.0, size=hops)
    powers = 10.0 ** rng.uniform(-1.0, 1.0, size=hops)
    return Network(Hop(gain=float(g), noise_var=1.0, power=float(p)) for g, p in zip(gains, powers))


def product_form_snr(net, start, k_af):
    """Full-power AF satisfies 1 + 1/gamma = prod_k (1 + 1/SNR_k)."""
    prod = 1.0
    for k in range(start, start + k_af + 1):
        prod *= 1.0 + 1.0 / per_hop_snr(net.hops[k])
    return 1.0 / (prod - 1.0)


class TestHop(unittest.TestCase):
    def test_per_hop_snr(self):
        self.assertEqual(per_hop_snr(Hop(gain=1.0, noise_var=1.0, power=1.0)), 1.0)
        self.assertAlmostEqual(per_hop_snr(Hop(gain=3.0, noise_var=0.5, power=2.0)), 36.0)
        self.assertAlmostEqual(per_hop_snr(Hop(gain=0.1, noise_var=1.0, power=100.0)), 1.0)

    def test_negative_gain_allowed(self):
        self.assertAlmostEqual(Hop(gain=-2.0, noise_var=1.0, power=1.0).snr, 4.0)

    def test_rejects_bad_values(self):
        with self.assertRaises(ChannelDomainError) as ctx:
            Hop(gain=1.0, noise_var=1.0, power=0.0)
        self.assertEqual(ctx.exception.field, "power")
        with self.assertRaises(ChannelDomainError):
            Hop(gain=1.0, noise_var=-1.0, power=1.0)
        with self.assertRaises(ChannelDomainError):
            Hop(gain=0.0, noise_var=1.0, power=1.0)
        with self.assertRaises(ChannelDomainError):
            Hop(gain=float("inf"), noise_var=1.0, power=1.0)

    def test_overflowing_snr_rejected(self):
        with self.assertRaises(ChannelDomainError):
            Hop(gain=1e200, noise_var=1e-200, power=1e10)


class TestNetwork(unittest.TestCase):
    def test_relay_count(self):
        net = Network.symmetric(relays=3)
        self.assertEqual(len(net), 4)
        self.assertEqual(net.relay_count, 3)

    def test_empty_network_rejected(self):
        with self.assertRaises(ChannelDomainError):
            Network([])

    def test_scaling(self):
        net = Network([Hop(2.0, 1.0, 3.0), Hop(0.5, 2.0, 1.0)])
        self.assertEqual([h.power for h in net.scaled_powers(10.0).hops], [30.0, 10.0])
        self.assertEqual([h.gain for h in net.scaled_gains(2.0).hops], [4.0, 1.0])
        self.assertEqual(net.per_hop_snrs(), [12.0, 0.125])
        with self.assertRaises(ChannelDomainError):
            net.scaled_powers(0.0)


class TestAmplificationGain(unittest.TestCase):
    def test_examples(self):
        self.assertAlmostEqual(amplification_gain(Hop(1.0, 1.0, 1.0), 2.0), 1.0)
        self.assertAlmostEqual(amplification_gain(Hop(2.0, 1.0, 3.0), 13.0), 1.0)
        self.assertAlmostEqual(amplification_gain(Hop(1.0, 1.0, 4.0), 1.0), math.sqrt(0.2))

    def test_non_positive_power(self):
        with self.assertRaises(ChannelDomainError):
            amplification_gain(Hop(1.0, 1.0, 1.0), 0.0)

    def test_relay_meets_power_exactly(self):
        net = Network([Hop(0.7, 1.0, 2.0), Hop(1.3, 0.5, 3.0), Hop(2.0, 1.0, 0.4)])
        self.assertEqual(len(segment_betas(net, 0, 2)), 2)
        for got, hop in zip(relay_transmit_powers(net, 0, 2), net.hops[1:]):
            self.assertAlmostEqual(got, hop.power, places=12)


def test_cascade_k0_is_hop_snr():
    net = Network([Hop(gain=2.0, noise_var=1.0, power=1.0)])
    result = cascade_snr(net, 0, 0)
    assert result.equiv_snr == 4.0
    assert result.betas == ()


def test_symmetric_two_hop():
    net = Network.symmetric(relays=1)
    result = cascade_snr(net, 0, 1)
    assert result.equiv_snr == pytest.approx(1.0 / 3.0, rel=1e-12)
    assert result.betas[0] == pytest.approx(math.sqrt(0.5))


def test_cascade_out_of_range():
    net = Network.symmetric(relays=2)
    with pytest.raises(SegmentIndexError):
        cascade_snr(net, 1, 2)
    with pytest.raises(SegmentIndexError):
        cascade_snr(net, -1, 0)
    with pytest.raises(IndexError):
        cascade_snr_high_snr(net, 3, 0)


def test_bottleneck_hop_dominates():
    net = Network([
        Hop(gain=1e4, noise_var=1.0, power=1.0),
        Hop(gain=1.0, noise_var=1.0, power=5.0),
        Hop(gain=1e4, noise_var=1.0, power=1.0),
    ])
    assert cascade_snr(net, 0, 2).equiv_snr == pytest.approx(5.0, rel=1e-6)


def test_high_snr_limit_examples():
    net = Network.symmetric(relays=4, power=9.0)
    assert cascade_snr_high_snr(net, 0, 2) == pytest.approx(3.0)
    net = Network([Hop(gain=1.0, noise_var=1.0, power=7.0)])
    assert cascade_snr_high_snr(net, 0, 0) == pytest.approx(7.0)


def test_matches_product_form(rng):
    for _ in range(100):
        net = random_network(rng, int(rng.integers(1, 9)))
        start = int(rng.integers(0, len(net)))
        k_af = int(rng.integers(0, len(net) - start))
        assert cascade_snr(net, start, k_af).equiv_snr == pytest.approx(
            product_form_snr(net, start, k_af), rel=1e-9
        )


def test_log_domain_agrees_with_direct(rng):
    for _ in range(50):
        net = random_network(rng, int(rng.integers(2, 12)))
        k_af = net.relay_count
        direct = cascade_snr(net, 0, k_af, log_domain_hops=64)
        logged = cascade_snr(net, 0, k_af, log_domain_hops=0)
        assert logged.equiv_snr == pytest.approx(direct.equiv_snr, rel=1e-9)


def test_log_domain_switch_counts_hops(caplog):
    net = Network.symmetric(relays=40, gain=1.2, noise_var=1.0, power=2.0)
    with caplog.at_level(logging.DEBUG, logger="relaydelay.channel"):
        cascade_snr(net, 0, 29, log_domain_hops=30)
    assert "log-domain cascade" not in caplog.text
    with caplog.at_level(logging.DEBUG, logger="relaydelay.channel"):
        cascade_snr(net, 0, 30, log_domain_hops=30)
    assert "log-domain cascade start=0 K=30" in caplog.text


def test_long_chain_stays_finite():
    net = Network.symmetric(relays=200, gain=10.0, noise_var=1.0, power=10.0)
    gamma = cascade_snr(net, 0, 200).equiv_snr
    assert math.isfinite(gamma)
    assert gamma == pytest.approx(product_form_snr(net, 0, 200), rel=1e-9)


def test_channel_algebra_bounds(rng):
    for _ in range(100):
        net = random_network(rng, int(rng.integers(2, 7)))
        k_af = net.relay_count
        gamma = cascade_snr(net, 0, k_af).equiv_snr
        assert gamma <= min(net.per_hop_snrs())
        assert gamma <= cascade_snr_high_snr(net, 0, k_af) * (1.0 + 1e-12)
        assert cascade_snr(net, 0, k_af - 1).equiv_snr > gamma


def test_gap_to_harmonic_limit_vanishes(rng):
    for _ in range(100):
        net = random_network(rng, int(rng.integers(2, 7))).scaled_powers(1e6)
        k_af = net.relay_count
        exact = cascade_snr(net, 0, k_af).equiv_snr
        limit = cascade_snr_high_snr(net, 0, k_af)
        assert abs(exact - limit) / limit <= 0.01


def test_gap_shrinks_with_scale():
    net = Network([Hop(0.5, 1.0, 2.0), Hop(3.0, 1.0, 0.3), Hop(1.0, 2.0, 1.0)])
    gaps = []
    for s in np.geomspace(1e1, 1e8, 8):
        scaled = net.scaled_powers(float(s))
        limit = cascade_snr_high_snr(scaled, 0, 2)
        gaps.append(abs(cascade_snr(scaled, 0, 2).equiv_snr - limit) / limit)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-6
