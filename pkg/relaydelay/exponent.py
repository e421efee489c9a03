"""
Gaussian random-coding exponent and the codelength it implies.

All logarithms are natural; message sizes are given in bits and converted to
nats. For a per-segment reliability delta the codelength bound is

    n(rho) = (rho * B * ln 2 - ln delta) / (rho * ln(1 + snr / (1 + rho)))

minimised over rho in [RHO_MIN, 1].
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .channel import Network, cascade_snr
from .config import settings
from .errors import ChannelDomainError, PartitionError

logger = logging.getLogger("relaydelay.exponent")

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


@dataclass(frozen=True)
class ReliabilityBudget:
    bits: int
    delta_e: float

    def __post_init__(self):
        if isinstance(self.bits, bool) or int(self.bits) != self.bits or self.bits < 1:
            raise ChannelDomainError(f"bits must be an integer >= 1 (got {self.bits!r})", field="bits")
        _check_delta(self.delta_e, "delta_e")

    @property
    def nats(self) -> float:
        return self.bits * math.log(2.0)

    def split(self, n_df: int) -> float:
        """Per-segment reliability under the union bound."""
        if n_df < 1:
            raise ChannelDomainError(f"N_DF must be >= 1 (got {n_df})", field="n_df")
        return self.delta_e / n_df


@dataclass(frozen=True)
class DelayBound:
    codelength: float
    rho: float
    snr_used: float
    delta_used: float


def _check_delta(delta: float, name: str = "delta") -> None:
    if not (0.0 < delta < 1.0):
        raise ChannelDomainError(f"{name} must lie in (0, 1) (got {delta!r})", field=name)


def random_coding_exponent(snr: float, rate: float, rho: float) -> float:
    """rho * ln(1 + snr/(1+rho)) - rho * rate, the Gaussian-input lower bound."""
    if not (snr > 0.0):
        raise ChannelDomainError(f"snr must be > 0 (got {snr!r})", field="snr")
    if rate < 0.0:
        raise ChannelDomainError(f"rate must be >= 0 (got {rate!r})", field="rate")
    if not (0.0 <= rho <= 1.0):
        raise ChannelDomainError(f"rho must lie in [0, 1] (got {rho!r})", field="rho")
    if rho == 0.0:
        return 0.0
    return rho * math.log1p(snr / (1.0 + rho)) - rho * rate


def codelength_at(snr: float, nats: float, delta: float, rho: float) -> float:
    """n(rho) for a message of ``nats`` nats at reliability ``delta``."""
    return (rho * nats - math.log(delta)) / (rho * math.log1p(snr / (1.0 + rho)))


def golden_section_minimize(f: Callable[[float], float], a: float, b: float,
                            tol: float = 1e-10, max_iter: int = 200) -> Tuple[float, float]:
    """
    Golden-section search on [a, b].

    Returns (x, f(x)) for the better of the two final probes; assumes f is
    unimodal on the interval.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc, yd = f(c), f(d)

    for _ in range(max_iter):
        if h <= tol:
            break
        if yc < yd:
            b, d, yd = d, c, yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    if yc < yd:
        return c, yc
    return d, yd


def optimize_rho(snr: float, nats: float, delta: float,
                 grid_points: Optional[int] = None,
                 rho_min: Optional[float] = None,
                 tol: Optional[float] = None) -> Tuple[float, float]:
    """
    Minimise n(rho) over [rho_min, 1]: coarse grid, then golden-section
    refinement on the bracket around the best grid point.
    """
    grid_points = grid_points or settings.RHO_GRID_POINTS
    rho_min = rho_min if rho_min is not None else settings.RHO_MIN
    tol = tol if tol is not None else settings.RHO_TOL

    grid = np.linspace(rho_min, 1.0, grid_points)
    values = (grid * nats - math.log(delta)) / (grid * np.log1p(snr / (1.0 + grid)))
    i = int(np.argmin(values))
    best_rho, best_n = float(grid[i]), float(values[i])

    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, grid_points - 1)])
    rho, n = golden_section_minimize(lambda r: codelength_at(snr, nats, delta, r), lo, hi, tol=tol)
    if n < best_n:
        best_rho, best_n = rho, n
    # the endpoints of the bracket are exact candidates too
    for edge in (lo, hi):
        n_edge = codelength_at(snr, nats, delta, edge)
        if n_edge < best_n:
            best_rho, best_n = edge, n_edge
    return best_rho, best_n


def delay_bound(snr: float, budget: ReliabilityBudget, delta: Optional[float] = None,
                **search) -> DelayBound:
    """
    Codelength needed to reach reliability ``delta`` (default: the budget's
    delta_e) over a Gaussian channel with received SNR ``snr``.
    """
    if not (snr > 0.0) or not math.isfinite(snr):
        raise ChannelDomainError(f"snr must be finite and > 0 (got {snr!r})", field="snr")
    delta = budget.delta_e if delta is None else delta
    _check_delta(delta)

    rho, _ = optimize_rho(snr, budget.nats, delta, **search)
    codelength = codelength_at(snr, budget.nats, delta, rho)
    logger.debug(f"delay_bound snr={snr:.6g} delta={delta:.3g} rho*={rho:.6f} n={codelength:.6g}")
    return DelayBound(codelength=codelength, rho=rho, snr_used=snr, delta_used=delta)


def validate_segments(net: Network, segments: Sequence[Tuple[int, int]]) -> None:
    """Segments must start at the source and tile nodes 0..H back to back."""
    if not segments:
        raise PartitionError("at least one segment is required", field="segments")
    expected = 0
    for start, k_af in segments:
        if start != expected or k_af < 0:
            raise PartitionError(
                f"segment ({start}, {k_af}) breaks the partition; expected start {expected}",
                field="segments",
            )
        expected = start + k_af + 1
    if expected != net.relay_count + 1:
        raise PartitionError(
            f"segments end at node {expected}, destination is node {net.relay_count + 1}",
            field="segments",
        )


def df_chain_delay(net: Network, segments: Sequence[Tuple[int, int]],
                   budget: ReliabilityBudget, **search) -> float:
    """
    Total delay of a DF chain whose decoding nodes start the given
    (start, K) segments; reliability is split evenly over the N_DF segments.
    """
    validate_segments(net, segments)
    delta = budget.split(len(segments))
    return math.fsum(
        delay_bound(cascade_snr(net, start, k_af).equiv_snr, budget, delta, **search).codelength
        for start, k_af in segments
    )
