"""
Network description files.

A description is a JSON document:

    {
      "hops": [{"gain": 1.0, "noise_var": 1.0, "power": 1.0}, ...],
      "bits": 1000,
      "delta_e": 1e-6,
      "feedback": [{"gain": ..., "noise_var": ..., "power": ...}, ...]   # optional
    }

``hops`` runs source -> destination, ``feedback`` runs destination -> source
and must have the same length.
"""
import json
import logging
import math
import os
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .channel import Hop, Network
from .errors import ConfigError, MissingFeedbackError
from .exponent import ReliabilityBudget
from .feedback import FeedbackSpec

logger = logging.getLogger("relaydelay.netconfig")


class HopConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    gain: float = Field(description="Amplitude gain h_k of the hop")
    noise_var: float = Field(gt=0.0, description="Noise variance at the receiving node")
    power: float = Field(gt=0.0, description="Transmit power of the sending node")

    @field_validator("gain")
    @classmethod
    def _gain_nonzero(cls, v: float) -> float:
        if v == 0.0 or not math.isfinite(v):
            raise ValueError("gain must be finite and non-zero")
        return v

    @field_validator("noise_var", "power")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("value must be finite")
        return v

    @model_validator(mode="after")
    def _finite_snr(self) -> "HopConfig":
        snr = self.gain * self.gain * self.power / self.noise_var
        if not (snr > 0.0) or not math.isfinite(snr):
            raise ValueError(f"per-hop SNR gain^2*power/noise_var must be finite and > 0 (got {snr!r})")
        return self

    def to_hop(self) -> Hop:
        return Hop(gain=self.gain, noise_var=self.noise_var, power=self.power)


class NetworkConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    hops: List[HopConfig] = Field(min_length=1, description="Forward hops, source first")
    bits: int = Field(ge=1, description="Message size B in bits")
    delta_e: float = Field(gt=0.0, lt=1.0, description="End-to-end error probability target")
    feedback: Optional[List[HopConfig]] = Field(
        default=None, description="Reverse hops, destination first"
    )

    @model_validator(mode="after")
    def _feedback_length(self) -> "NetworkConfig":
        if self.feedback is not None and len(self.feedback) != len(self.hops):
            raise ValueError(
                f"feedback has {len(self.feedback)} hops but hops has {len(self.hops)}"
            )
        return self

    @property
    def relay_count(self) -> int:
        return len(self.hops) - 1

    def network(self) -> Network:
        return Network(h.to_hop() for h in self.hops)

    def budget(self) -> ReliabilityBudget:
        return ReliabilityBudget(bits=self.bits, delta_e=self.delta_e)

    def feedback_spec(self) -> FeedbackSpec:
        if self.feedback is None:
            raise MissingFeedbackError("config has no 'feedback' section", field="feedback")
        return FeedbackSpec(forward=self.network(), reverse=Network(h.to_hop() for h in self.feedback))


def _field_name(loc) -> str:
    parts = [str(p) for p in loc if p not in ("", None)]
    # an empty location is the top-level feedback length check
    return ".".join(parts) if parts else "feedback"


def config_from_dict(data: Any) -> NetworkConfig:
    if not isinstance(data, dict):
        raise ConfigError("top-level document must be a JSON object", field="<root>")
    try:
        return NetworkConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        field = _field_name(first.get("loc", ()))
        raise ConfigError(f"{field}: {first.get('msg', 'invalid value')}", field=field) from e


def parse_config(path: str) -> NetworkConfig:
    """Load and validate a network description file."""
    if not os.path.exists(path):
        raise ConfigError(f"config not found: {path}", field="path")

    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"{path}: line {e.lineno} column {e.colno}: {e.msg}", field=None, line=e.lineno, column=e.colno
        ) from e

    try:
        return config_from_dict(data)
    except ConfigError as e:
        logger.error(f"{path}: {e}")
        raise


def config_to_dict(cfg: NetworkConfig) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "hops": [h.model_dump() for h in cfg.hops],
        "bits": cfg.bits,
        "delta_e": cfg.delta_e,
    }
    if cfg.feedback is not None:
        data["feedback"] = [h.model_dump() for h in cfg.feedback]
    return data


def serialize_config(cfg: NetworkConfig) -> str:
    """Canonical JSON text: fixed key order, floats as written by repr."""
    return json.dumps(config_to_dict(cfg), indent=2) + "\n"


def save_config(cfg: NetworkConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_config(cfg))


def normalize_config_text(text: str) -> str:
    """Canonical form of a description document (for round-trip checks)."""
    return serialize_config(config_from_dict(json.loads(text)))
