"""Delay-optimal AF/DF relay planning for Gaussian multihop chains."""

__version__ = "0.1.0"

from .channel import CascadeResult, Hop, Network, cascade_snr, cascade_snr_high_snr, per_hop_snr
from .errors import (
    ChannelDomainError,
    ConfigError,
    DegenerateChannelError,
    MissingFeedbackError,
    OracleRefusedError,
    PartitionError,
    RelayDelayError,
    SegmentIndexError,
    SweepParameterError,
)
from .exponent import DelayBound, ReliabilityBudget, delay_bound, df_chain_delay, random_coding_exponent
from .feedback import (
    FeedbackExponent,
    FeedbackSpec,
    P2PReference,
    equivalent_noise_feedback,
    equivalent_noise_forward,
    feedback_exponent,
    relay_beats_p2p,
)
from .netconfig import NetworkConfig, parse_config
from .planner import (
    Relaying,
    SchemePlan,
    Segment,
    brute_force_oracle,
    high_snr_ratio,
    optimize,
    symmetric_equal_split,
    threshold_baseline,
)
