"""
AF/DF relay assignment that minimises end-to-end delay.

A plan picks N_DF decoding nodes (the source is always one) at positions
p_1 = 0 < p_2 < ... < p_N <= H. Segment i runs from p_i through K_i AF relays
to the next decoding node, so sum(K_i) + N_DF = H + 1. Each segment is coded
for reliability delta_e / N_DF, and the total delay is the sum of the segment
codelengths.
"""
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .channel import Network, cascade_snr
from .config import settings
from .errors import ChannelDomainError, OracleRefusedError, PartitionError
from .exponent import DelayBound, ReliabilityBudget, delay_bound, validate_segments

logger = logging.getLogger("relaydelay.planner")


class Relaying(str, Enum):
    AF = "AF"
    DF = "DF"


@dataclass(frozen=True)
class Segment:
    start: int
    k_af: int

    @property
    def end(self) -> int:
        """Index of the decoding node (or destination) that closes the segment."""
        return self.start + self.k_af + 1


@dataclass(frozen=True)
class SchemePlan:
    assignment: Tuple[Relaying, ...]
    segments: Tuple[Segment, ...]
    n_df: int
    total_delay: float
    per_segment: Tuple[DelayBound, ...]

    def __post_init__(self):
        relays = len(self.assignment)
        if sum(s.k_af for s in self.segments) + self.n_df != relays + 1:
            raise PartitionError("segment AF counts and N_DF do not add up to H + 1", field="segments")
        if len(self.segments) != self.n_df or len(self.per_segment) != self.n_df:
            raise PartitionError("one segment and one delay bound per decoding node", field="segments")
        expected = 0
        for seg in self.segments:
            if seg.start != expected:
                raise PartitionError(f"segment at {seg.start} is not contiguous", field="segments")
            expected = seg.end
        if expected != relays + 1:
            raise PartitionError("segments do not reach the destination", field="segments")

    @property
    def relay_count(self) -> int:
        return len(self.assignment)

    @property
    def df_positions(self) -> Tuple[int, ...]:
        return tuple(s.start for s in self.segments)

    @property
    def k_values(self) -> Tuple[int, ...]:
        return tuple(s.k_af for s in self.segments)

    def label(self) -> str:
        """Compact assignment string, e.g. 'AF,DF,AF'; empty for H = 0."""
        return ",".join(r.value for r in self.assignment)


def segments_from_assignment(assignment: Sequence[Relaying]) -> List[Segment]:
    """Cut the chain at every DF relay; the source always starts the first segment."""
    starts = [0] + [j for j, r in enumerate(assignment, start=1) if Relaying(r) is Relaying.DF]
    ends = starts[1:] + [len(assignment) + 1]
    return [Segment(start=s, k_af=e - s - 1) for s, e in zip(starts, ends)]


def assignment_from_positions(relays: int, positions: Iterable[int]) -> Tuple[Relaying, ...]:
    df = set(positions)
    return tuple(Relaying.DF if j in df else Relaying.AF for j in range(1, relays + 1))


def parse_assignment(text: str) -> Tuple[Relaying, ...]:
    """Accept 'AF,DF,AF', 'AF DF AF' or the compact 'ADA'."""
    text = text.strip().upper()
    if not text:
        return ()
    if "," in text or " " in text:
        tokens = [t for t in text.replace(",", " ").split() if t]
    elif all(ch in "AD" for ch in text):
        tokens = [ch + "F" for ch in text]
    else:
        tokens = [text[i:i + 2] for i in range(0, len(text), 2)]
    try:
        return tuple(Relaying(t) for t in tokens)
    except ValueError:
        raise ChannelDomainError(f"assignment must contain only AF/DF tags (got {text!r})", field="assignment")


class SegmentCostTable:
    """
    Memoised segment costs for one network and budget.

    Equivalent SNRs are cached per (start, K) and delay bounds per
    (start, K, N_DF), so the DP, the oracle and the baselines all see the same
    floating-point values.
    """

    def __init__(self, net: Network, budget: ReliabilityBudget, **search):
        self.net = net
        self.budget = budget
        self.search = search
        self._gamma: Dict[Tuple[int, int], float] = {}
        self._cost: Dict[Tuple[int, int, int], DelayBound] = {}

    @property
    def relay_count(self) -> int:
        return self.net.relay_count

    def gamma(self, start: int, k_af: int) -> float:
        key = (start, k_af)
        if key not in self._gamma:
            self._gamma[key] = cascade_snr(self.net, start, k_af).equiv_snr
        return self._gamma[key]

    def cost(self, start: int, k_af: int, n_df: int) -> DelayBound:
        key = (start, k_af, n_df)
        if key not in self._cost:
            self._cost[key] = delay_bound(
                self.gamma(start, k_af), self.budget, self.budget.split(n_df), **self.search
            )
        return self._cost[key]

    def plan(self, assignment: Sequence[Relaying]) -> SchemePlan:
        assignment = tuple(Relaying(r) for r in assignment)
        if len(assignment) != self.relay_count:
            raise PartitionError(
                f"assignment has {len(assignment)} tags for {self.relay_count} relays", field="assignment"
            )
        segments = segments_from_assignment(assignment)
        n_df = len(segments)
        bounds = tuple(self.cost(s.start, s.k_af, n_df) for s in segments)
        return SchemePlan(
            assignment=assignment,
            segments=tuple(segments),
            n_df=n_df,
            total_delay=math.fsum(b.codelength for b in bounds),
            per_segment=bounds,
        )

    def total(self, assignment: Sequence[Relaying]) -> float:
        segments = segments_from_assignment(assignment)
        n_df = len(segments)
        return math.fsum(self.cost(s.start, s.k_af, n_df).codelength for s in segments)


def segment_cost(net: Network, budget: ReliabilityBudget, start: int, k_af: int,
                 delta_seg: float, **search) -> DelayBound:
    """Delay bound of one segment coded for reliability ``delta_seg``."""
    return delay_bound(cascade_snr(net, start, k_af).equiv_snr, budget, delta_seg, **search)


def plan_from_assignment(net: Network, budget: ReliabilityBudget, assignment: Sequence[Relaying],
                         costs: Optional[SegmentCostTable] = None) -> SchemePlan:
    costs = costs or SegmentCostTable(net, budget)
    return costs.plan(assignment)


def all_af_plan(net: Network, budget: ReliabilityBudget,
                costs: Optional[SegmentCostTable] = None) -> SchemePlan:
    return plan_from_assignment(net, budget, (Relaying.AF,) * net.relay_count, costs)


def all_df_plan(net: Network, budget: ReliabilityBudget,
                costs: Optional[SegmentCostTable] = None) -> SchemePlan:
    return plan_from_assignment(net, budget, (Relaying.DF,) * net.relay_count, costs)


def _select(candidates: Iterable[Tuple[float, int, Tuple[int, ...]]],
            tie_rtol: float) -> Tuple[float, int, Tuple[int, ...]]:
    """
    Minimum delay; delays within ``tie_rtol`` of it are tied and resolved by
    smaller N_DF, then lexicographically earliest DF positions.
    """
    candidates = list(candidates)
    best = min(c[0] for c in candidates)
    pool = [c for c in candidates if c[0] <= best + tie_rtol * abs(best)]
    return min(pool, key=lambda c: (c[1], c[2]))


def _best_positions(costs: SegmentCostTable, n_df: int, tie_rtol: float) -> Tuple[int, ...]:
    """
    Exact-N_DF DP over decoding positions.

    f[m][i] is the least delay from decoding node i to the destination using
    exactly m segments; ties prefer the earliest next decoding node.
    """
    relays = costs.relay_count
    f: Dict[Tuple[int, int], float] = {}
    for m in range(1, n_df + 1):
        for i in range(relays - m + 1, -1, -1):
            if m == 1:
                f[m, i] = costs.cost(i, relays - i, n_df).codelength
            else:
                f[m, i] = min(
                    costs.cost(i, j - i - 1, n_df).codelength + f[m - 1, j]
                    for j in range(i + 1, relays - m + 3)
                )

    positions = [0]
    i = 0
    for m in range(n_df, 1, -1):
        target = f[m, i]
        for j in range(i + 1, relays - m + 3):
            if costs.cost(i, j - i - 1, n_df).codelength + f[m - 1, j] <= target + tie_rtol * abs(target):
                break
        positions.append(j)
        i = j
    return tuple(positions)


def optimize(net: Network, budget: ReliabilityBudget, costs: Optional[SegmentCostTable] = None,
             tie_rtol: Optional[float] = None) -> SchemePlan:
    """
    Delay-optimal AF/DF assignment.

    The reliability split delta_e / N_DF couples every segment, so the DP runs
    once per candidate N_DF and the winners are compared at the end.
    """
    costs = costs or SegmentCostTable(net, budget)
    tie_rtol = settings.TIE_RTOL if tie_rtol is None else tie_rtol
    relays = net.relay_count

    candidates = []
    for n_df in range(1, relays + 2):
        positions = _best_positions(costs, n_df, tie_rtol)
        total = costs.total(assignment_from_positions(relays, positions))
        logger.debug(f"N_DF={n_df}: positions={positions} delay={total:.6g}")
        candidates.append((total, n_df, positions))

    _, _, positions = _select(candidates, tie_rtol)
    return costs.plan(assignment_from_positions(relays, positions))


def brute_force_oracle(net: Network, budget: ReliabilityBudget,
                       costs: Optional[SegmentCostTable] = None,
                       tie_rtol: Optional[float] = None,
                       max_relays: Optional[int] = None,
                       workers: Optional[int] = None) -> SchemePlan:
    """Enumerate all 2^H assignments and keep the best under the optimize tie-break."""
    relays = net.relay_count
    max_relays = settings.ORACLE_MAX_RELAYS if max_relays is None else max_relays
    if relays > max_relays:
        logger.warning(f"oracle refused: H={relays} exceeds limit {max_relays}")
        raise OracleRefusedError(
            f"brute-force oracle refused: H={relays} > {max_relays} relays", relays=relays, limit=max_relays
        )
    costs = costs or SegmentCostTable(net, budget)
    tie_rtol = settings.TIE_RTOL if tie_rtol is None else tie_rtol
    workers = workers or settings.WORKERS
    logger.info(f"oracle enumerating {2 ** relays} assignments (H={relays})")

    def evaluate(assignment: Tuple[Relaying, ...]) -> Tuple[float, int, Tuple[int, ...]]:
        segments = segments_from_assignment(assignment)
        return costs.total(assignment), len(segments), tuple(s.start for s in segments)

    assignments = itertools.product((Relaying.AF, Relaying.DF), repeat=relays)
    if workers > 1:
        # fill the cache serially so threads only read it
        for n_df in range(1, relays + 2):
            for start in range(relays + 1):
                for k_af in range(relays - start + 1):
                    costs.cost(start, k_af, n_df)
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(evaluate, assignments, chunksize=64))
    else:
        results = [evaluate(a) for a in assignments]

    _, _, positions = _select(results, tie_rtol)
    return costs.plan(assignment_from_positions(relays, positions))


def symmetric_equal_split(relays: int, n_df: int) -> List[int]:
    """
    Most-equal AF counts for ``n_df`` segments under sum(K_i) = H + 1 - N_DF;
    longer segments come first.
    """
    if relays < 0:
        raise ChannelDomainError(f"relay count must be >= 0 (got {relays})", field="hops")
    if n_df < 1 or n_df > relays + 1:
        raise ChannelDomainError(f"N_DF must lie in [1, {relays + 1}] (got {n_df})", field="n_df")
    q, r = divmod(relays + 1 - n_df, n_df)
    return [q + 1] * r + [q] * (n_df - r)


def split_segments(k_values: Sequence[int]) -> List[Tuple[int, int]]:
    """(start, K) pairs for consecutive segments with the given AF counts."""
    segments = []
    start = 0
    for k in k_values:
        segments.append((start, k))
        start += k + 1
    return segments


def high_snr_ratio(net: Network, budget: ReliabilityBudget, n_df: int, scale: float) -> float:
    """
    D_AF(s) / D_DF(s) with every power scaled by ``s``: the all-AF delay over
    the delay of the equal-split plan with ``n_df`` decoding nodes.
    """
    if not (scale > 0.0):
        raise ChannelDomainError(f"scale must be > 0 (got {scale!r})", field="scale")
    scaled = net.scaled_powers(scale)
    relays = net.relay_count
    segments = split_segments(symmetric_equal_split(relays, n_df))
    validate_segments(scaled, segments)
    costs = SegmentCostTable(scaled, budget)
    d_af = costs.cost(0, relays, 1).codelength
    d_df = math.fsum(costs.cost(start, k, n_df).codelength for start, k in segments)
    return d_af / d_df


def threshold_baseline(net: Network, budget: ReliabilityBudget, threshold: float,
                       costs: Optional[SegmentCostTable] = None) -> SchemePlan:
    """
    Common-practice policy: a relay amplifies iff the SNR it receives (the
    equivalent SNR of the AF cascade since the last decoding node) reaches
    ``threshold``, and decodes otherwise.
    """
    costs = costs or SegmentCostTable(net, budget)
    assignment = []
    last_df = 0
    for j in range(1, net.relay_count + 1):
        received = costs.gamma(last_df, j - last_df - 1)
        if received >= threshold:
            assignment.append(Relaying.AF)
        else:
            assignment.append(Relaying.DF)
            last_df = j
    return costs.plan(assignment)
