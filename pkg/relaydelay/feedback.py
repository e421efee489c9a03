"""
Error exponents of AF relay chains with active noisy feedback.

Both the forward chain (source -> destination) and the feedback chain
(destination -> source) are full-power AF cascades. Each is reduced to a
unit-gain channel whose noise variance is sigma_F^2 (forward) or
sigma_FB^2 (feedback); the point-to-point active-feedback exponent
2 P_S / sigma_F^2 + 2 P_D~ / sigma_FB^2 then applies.
"""
import logging
import math
from dataclasses import dataclass
from typing import Sequence

from .channel import Network, cascade_snr
from .errors import ChannelDomainError, DegenerateChannelError

logger = logging.getLogger("relaydelay.feedback")


@dataclass(frozen=True)
class FeedbackSpec:
    """
    ``forward`` runs source -> destination; ``reverse`` runs destination ->
    source, so ``reverse.hops[0].power`` is the destination's feedback power.
    """
    forward: Network
    reverse: Network

    def __post_init__(self):
        if len(self.forward) != len(self.reverse):
            raise ChannelDomainError(
                f"forward has {len(self.forward)} hops but reverse has {len(self.reverse)}",
                field="feedback",
            )

    @property
    def source_power(self) -> float:
        return self.forward.source_power

    @property
    def feedback_power(self) -> float:
        return self.reverse.source_power


@dataclass(frozen=True)
class FeedbackExponent:
    sigma_f_sq: float
    sigma_fb_sq: float
    exponent: float
    codelength: float


@dataclass(frozen=True)
class P2PReference:
    """Point-to-point link the relay chain is compared against."""
    forward_noise_var: float
    forward_gain: float
    feedback_noise_var: float
    feedback_gain: float

    def __post_init__(self):
        for name in ("forward_noise_var", "feedback_noise_var"):
            if not (getattr(self, name) > 0.0):
                raise ChannelDomainError(f"{name} must be > 0", field=name)
        for name in ("forward_gain", "feedback_gain"):
            if getattr(self, name) == 0.0:
                raise ChannelDomainError(f"{name} must be non-zero", field=name)

    @property
    def forward_sigma_sq(self) -> float:
        return self.forward_noise_var / self.forward_gain ** 2

    @property
    def feedback_sigma_sq(self) -> float:
        return self.feedback_noise_var / self.feedback_gain ** 2


def chain_unit_gain_noise(net: Network) -> float:
    """
    Noise variance of the whole AF chain referred to a unit-gain channel:

        (sum_k prod_{i=k}^H (beta_i h_i)^2 sigma_k^2 + sigma_end^2) / (h_0^2 prod_{i=1}^H (beta_i h_i)^2)
    """
    result = cascade_snr(net, 0, net.relay_count)
    if result.equiv_gain == 0.0:
        raise DegenerateChannelError("chain gain product is zero", field="gain")
    sigma_sq = result.equiv_noise_var / result.equiv_gain ** 2
    if not math.isfinite(sigma_sq) or sigma_sq <= 0.0:
        raise DegenerateChannelError(f"chain noise is degenerate ({sigma_sq!r})", field="gain")
    return sigma_sq


def equivalent_noise_forward(fs: FeedbackSpec) -> float:
    """sigma_F^2 of the forward chain."""
    return chain_unit_gain_noise(fs.forward)


def equivalent_noise_feedback(fs: FeedbackSpec) -> float:
    """sigma_FB^2 of the reverse chain."""
    return chain_unit_gain_noise(fs.reverse)


def single_relay_noise(first_gain: float, second_gain: float, beta: float,
                       relay_noise_var: float, end_noise_var: float) -> float:
    """Closed single-relay form sigma_R^2/h_1^2 + sigma_D^2/(h_1 h_2 beta)^2."""
    return relay_noise_var / first_gain ** 2 + end_noise_var / (first_gain * second_gain * beta) ** 2


def _check_delta(delta_e: float) -> None:
    if not (0.0 < delta_e < 1.0):
        raise ChannelDomainError(f"delta_e must lie in (0, 1) (got {delta_e!r})", field="delta_e")


def feedback_exponent(fs: FeedbackSpec, delta_e: float) -> FeedbackExponent:
    _check_delta(delta_e)
    sigma_f_sq = equivalent_noise_forward(fs)
    sigma_fb_sq = equivalent_noise_feedback(fs)
    exponent = 2.0 * fs.source_power / sigma_f_sq + 2.0 * fs.feedback_power / sigma_fb_sq
    codelength = math.log(1.0 / delta_e) / exponent
    logger.debug(f"E_FB={exponent:.6g} n_FB={codelength:.6g}")
    return FeedbackExponent(
        sigma_f_sq=sigma_f_sq,
        sigma_fb_sq=sigma_fb_sq,
        exponent=exponent,
        codelength=codelength,
    )


def no_feedback_binary_delay(forward: Network, delta_e: float) -> float:
    """
    Antipodal single-bit signalling over the forward AF chain without feedback,
    P_b = exp(-h_eq^2 P_S n / (2 sigma_eq^2)); returns the n reaching delta_e.
    """
    _check_delta(delta_e)
    sigma_f_sq = chain_unit_gain_noise(forward)
    return 2.0 * sigma_f_sq / forward.source_power * math.log(1.0 / delta_e)


def high_snr_gain_condition(gains: Sequence[float], p2p_gain: float) -> bool:
    """Unit-noise, equal-power, high-SNR comparison: sum_k 1/h_k^2 < 1/h_pp^2."""
    if not gains or any(g == 0.0 for g in gains) or p2p_gain == 0.0:
        raise ChannelDomainError("gains must be non-zero", field="gain")
    return math.fsum(1.0 / g ** 2 for g in gains) < 1.0 / p2p_gain ** 2


def relay_beats_p2p(fs: FeedbackSpec, p2p: P2PReference, high_snr: bool = False) -> bool:
    """
    Sufficient condition for the relay chain's feedback exponent to exceed the
    point-to-point one: both equivalent noises must be strictly smaller.
    ``high_snr`` switches to the simplified gain-only form.
    """
    if high_snr:
        forward_gains = [h.gain for h in fs.forward.hops]
        reverse_gains = [h.gain for h in fs.reverse.hops]
        return (high_snr_gain_condition(forward_gains, p2p.forward_gain)
                and high_snr_gain_condition(reverse_gains, p2p.feedback_gain))
    return (equivalent_noise_forward(fs) < p2p.forward_sigma_sq
            and equivalent_noise_feedback(fs) < p2p.feedback_sigma_sq)
