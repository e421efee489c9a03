"""
Gaussian multihop chain and amplify-and-forward cascade algebra.

Node indexing: node 0 is the source, nodes 1..H are relays, node H+1 is the
destination. Hop k carries node k -> node k+1; its ``power`` is the transmit
power of node k and its ``noise_var`` is the noise variance at node k+1.
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from .config import settings
from .errors import ChannelDomainError, DegenerateChannelError, SegmentIndexError

logger = logging.getLogger("relaydelay.channel")


def _check_positive(value: float, name: str) -> None:
    if not (value > 0.0) or not math.isfinite(value):
        raise ChannelDomainError(f"{name} must be finite and > 0 (got {value!r})", field=name)


@dataclass(frozen=True)
class Hop:
    gain: float
    noise_var: float
    power: float

    def __post_init__(self):
        if self.gain == 0.0 or not math.isfinite(self.gain):
            raise ChannelDomainError(f"gain must be finite and non-zero (got {self.gain!r})", field="gain")
        _check_positive(self.noise_var, "noise_var")
        _check_positive(self.power, "power")
        snr = self.gain * self.gain * self.power / self.noise_var
        if not (snr > 0.0) or not math.isfinite(snr):
            raise ChannelDomainError(f"per-hop SNR must be finite and > 0 (got {snr!r})", field="gain")

    @property
    def snr(self) -> float:
        return per_hop_snr(self)


@dataclass(frozen=True)
class Network:
    hops: Tuple[Hop, ...]

    def __init__(self, hops: Iterable[Hop]):
        object.__setattr__(self, "hops", tuple(hops))
        if not self.hops:
            raise ChannelDomainError("a network needs at least one hop", field="hops")

    def __len__(self) -> int:
        return len(self.hops)

    @property
    def relay_count(self) -> int:
        """H, the number of relays between source and destination."""
        return len(self.hops) - 1

    @property
    def source_power(self) -> float:
        return self.hops[0].power

    def per_hop_snrs(self) -> List[float]:
        return [per_hop_snr(h) for h in self.hops]

    def scaled_powers(self, scale: float) -> "Network":
        """Every node's power multiplied by ``scale`` (P_k = s * P_k)."""
        _check_positive(scale, "scale")
        return Network(replace(h, power=h.power * scale) for h in self.hops)

    def scaled_gains(self, scale: float) -> "Network":
        """Every hop's amplitude gain multiplied by ``scale``."""
        _check_positive(scale, "scale")
        return Network(replace(h, gain=h.gain * scale) for h in self.hops)

    @classmethod
    def symmetric(cls, relays: int, gain: float = 1.0, noise_var: float = 1.0,
                  power: float = 1.0) -> "Network":
        if relays < 0:
            raise ChannelDomainError(f"relay count must be >= 0 (got {relays})", field="hops")
        return cls(Hop(gain=gain, noise_var=noise_var, power=power) for _ in range(relays + 1))


@dataclass(frozen=True)
class CascadeResult:
    equiv_gain: float
    equiv_noise_var: float
    equiv_snr: float
    betas: Tuple[float, ...] = ()


def per_hop_snr(hop: Hop) -> float:
    return hop.gain * hop.gain * hop.power / hop.noise_var


def amplification_gain(prev_hop: Hop, this_power: float) -> float:
    """
    AF gain at full transmit power.

    The relay receives h^2 P + sigma^2 of power over ``prev_hop`` and scales it
    so its own transmission meets ``this_power`` with equality.
    """
    _check_positive(this_power, "power")
    _check_positive(prev_hop.power, "power")
    received = prev_hop.gain * prev_hop.gain * prev_hop.power + prev_hop.noise_var
    return math.sqrt(this_power / received)


def _check_segment(net: Network, start: int, k_af: int) -> None:
    if start < 0 or k_af < 0 or start + k_af > net.relay_count:
        raise SegmentIndexError(
            f"segment start={start}, K={k_af} does not fit a network with H={net.relay_count}",
            field="segment",
        )


def segment_betas(net: Network, start: int, k_af: int) -> List[float]:
    """beta_j for the AF relays j = start+1 .. start+K."""
    _check_segment(net, start, k_af)
    return [
        amplification_gain(net.hops[j - 1], net.hops[j].power)
        for j in range(start + 1, start + k_af + 1)
    ]


def cascade_snr(net: Network, start: int, k_af: int,
                log_domain_hops: Optional[int] = None) -> CascadeResult:
    """
    Equivalent point-to-point channel seen by the node ending the segment that
    starts at decoding node ``start`` and runs through ``k_af`` AF relays.

    Noise at AF relay k is amplified by prod_{j=k}^{start+K} (beta_j h_j)^2 and
    each hop contributes its own receiver noise variance.
    """
    _check_segment(net, start, k_af)
    if log_domain_hops is None:
        log_domain_hops = settings.LOG_DOMAIN_HOPS

    first = net.hops[start]
    if k_af == 0:
        return CascadeResult(
            equiv_gain=first.gain,
            equiv_noise_var=first.noise_var,
            equiv_snr=per_hop_snr(first),
        )

    betas = segment_betas(net, start, k_af)
    relays = range(start + 1, start + k_af + 1)
    gains = np.array([net.hops[j].gain for j in relays])
    # noise variance at AF relay k is carried by the hop arriving there
    relay_noise = np.array([net.hops[k - 1].noise_var for k in relays])
    end_noise = net.hops[start + k_af].noise_var
    amp = (np.asarray(betas) * gains) ** 2
    sign = math.copysign(1.0, first.gain) * float(np.prod(np.sign(gains)))

    if k_af + 1 <= log_domain_hops:
        # suffix[k] = prod_{j=k}^{end} (beta_j h_j)^2
        suffix = np.cumprod(amp[::-1])[::-1]
        equiv_gain = first.gain * float(np.prod(np.asarray(betas) * gains))
        equiv_noise = float(np.sum(suffix * relay_noise)) + end_noise
    else:
        log_amp = np.log(amp)
        log_suffix = np.cumsum(log_amp[::-1])[::-1]
        log_total = float(log_suffix[0])
        log_noise = float(logsumexp(np.append(log_suffix + np.log(relay_noise), math.log(end_noise))))
        # normalised to the source side: unit cascade product
        equiv_gain = sign * abs(first.gain)
        equiv_noise = math.exp(log_noise - log_total)
        logger.debug(f"log-domain cascade start={start} K={k_af} log_prod={log_total:.3f}")

    if equiv_gain == 0.0 or not math.isfinite(equiv_gain) or not math.isfinite(equiv_noise):
        raise DegenerateChannelError(
            f"cascade gain product degenerate for start={start}, K={k_af}", field="gain"
        )

    equiv_snr = equiv_gain * equiv_gain * first.power / equiv_noise
    return CascadeResult(
        equiv_gain=equiv_gain,
        equiv_noise_var=equiv_noise,
        equiv_snr=equiv_snr,
        betas=tuple(betas),
    )


def cascade_snr_high_snr(net: Network, start: int, k_af: int) -> float:
    """Harmonic limit (sum_k 1/SNR_k)^-1 over the hops of the segment."""
    _check_segment(net, start, k_af)
    return 1.0 / math.fsum(1.0 / per_hop_snr(net.hops[k]) for k in range(start, start + k_af + 1))


def relay_transmit_powers(net: Network, start: int, k_af: int) -> List[float]:
    """Average transmit power of each AF relay in the segment under full-power gains."""
    betas = segment_betas(net, start, k_af)
    powers = []
    incoming = net.hops[start].power
    for offset, beta in enumerate(betas):
        prev = net.hops[start + offset]
        received = prev.gain * prev.gain * incoming + prev.noise_var
        incoming = beta * beta * received
        powers.append(incoming)
    return powers
