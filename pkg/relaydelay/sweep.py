"""Parameter sweeps over a network description and their CSV rendering."""
import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .channel import Network
from .config import settings
from .errors import ChannelDomainError, SweepParameterError
from .exponent import ReliabilityBudget
from .planner import SegmentCostTable, all_af_plan, all_df_plan, optimize

logger = logging.getLogger("relaydelay.sweep")

SWEEP_PARAMETERS = ("gain-scale", "power-scale", "delta_e", "bits")

CSV_COLUMNS = ("all_af_delay", "all_df_delay", "optimal_delay", "optimal_n_df", "af_df_ratio")


@dataclass(frozen=True)
class SweepRow:
    value: float
    all_af_delay: float
    all_df_delay: float
    optimal_delay: float
    optimal_n_df: int

    @property
    def af_df_ratio(self) -> float:
        return self.all_af_delay / self.all_df_delay


def parse_grid(text: str, spacing: str = "log") -> List[float]:
    """'start:stop:count' -> grid points; a bare number is a one-point grid."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) != 3:
            raise ValueError(text)
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise SweepParameterError(f"grid must look like start:stop:count (got {text!r})", field="grid")
    return make_grid(start, stop, count, spacing)


def parse_values(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise SweepParameterError(f"values must be a comma-separated list of numbers (got {text!r})", field="values")


def make_grid(start: float, stop: float, count: int, spacing: str = "log") -> List[float]:
    if count < 1:
        raise SweepParameterError(f"grid needs at least one point (got {count})", field="grid")
    if count == 1:
        return [start]
    if spacing == "log":
        if start <= 0 or stop <= 0:
            raise SweepParameterError("log grid bounds must be > 0", field="grid")
        return [float(v) for v in np.geomspace(start, stop, count)]
    if spacing == "linear":
        return [float(v) for v in np.linspace(start, stop, count)]
    raise SweepParameterError(f"unknown spacing {spacing!r} (use log or linear)", field="spacing")


def apply_parameter(net: Network, budget: ReliabilityBudget, parameter: str,
                    value: float) -> Tuple[Network, ReliabilityBudget]:
    try:
        if parameter == "gain-scale":
            return net.scaled_gains(value), budget
        if parameter == "power-scale":
            return net.scaled_powers(value), budget
        if parameter == "delta_e":
            return net, ReliabilityBudget(bits=budget.bits, delta_e=value)
        if parameter == "bits":
            if int(value) != value:
                raise SweepParameterError(f"bits must be integral (got {value!r})", field="bits")
            return net, ReliabilityBudget(bits=int(value), delta_e=budget.delta_e)
    except ChannelDomainError as e:
        raise SweepParameterError(f"{parameter}={value!r}: {e}", field=parameter) from e
    raise SweepParameterError(
        f"unknown sweep parameter {parameter!r}; expected one of {', '.join(SWEEP_PARAMETERS)}",
        field="parameter",
    )


def evaluate_point(net: Network, budget: ReliabilityBudget, parameter: str, value: float) -> SweepRow:
    point_net, point_budget = apply_parameter(net, budget, parameter, value)
    costs = SegmentCostTable(point_net, point_budget)
    best = optimize(point_net, point_budget, costs=costs)
    return SweepRow(
        value=value,
        all_af_delay=all_af_plan(point_net, point_budget, costs).total_delay,
        all_df_delay=all_df_plan(point_net, point_budget, costs).total_delay,
        optimal_delay=best.total_delay,
        optimal_n_df=best.n_df,
    )


def run_sweep(net: Network, budget: ReliabilityBudget, parameter: str, values: Sequence[float],
              workers: Optional[int] = None) -> List[SweepRow]:
    """One row per grid value, in grid order regardless of worker count."""
    if parameter not in SWEEP_PARAMETERS:
        raise SweepParameterError(
            f"unknown sweep parameter {parameter!r}; expected one of {', '.join(SWEEP_PARAMETERS)}",
            field="parameter",
        )
    workers = workers or settings.WORKERS
    logger.info(f"sweeping {parameter} over {len(values)} point(s) with {workers} worker(s)")
    if workers > 1 and len(values) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(lambda v: evaluate_point(net, budget, parameter, v), values))
    return [evaluate_point(net, budget, parameter, v) for v in values]


def find_crossovers(rows: Sequence[SweepRow]) -> List[Tuple[float, float]]:
    """Consecutive grid values between which all-AF and all-DF swap places."""
    crossings = []
    for prev, cur in zip(rows, rows[1:]):
        if (prev.all_af_delay > prev.all_df_delay) != (cur.all_af_delay > cur.all_df_delay):
            crossings.append((prev.value, cur.value))
    return crossings


def format_float(value: float, digits: Optional[int] = None) -> str:
    digits = digits or settings.CSV_DIGITS
    return f"{value:.{digits}g}"


def rows_to_csv(rows: Sequence[SweepRow], parameter: str, digits: Optional[int] = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow((parameter,) + CSV_COLUMNS)
    for row in rows:
        writer.writerow((
            format_float(row.value, digits),
            format_float(row.all_af_delay, digits),
            format_float(row.all_df_delay, digits),
            format_float(row.optimal_delay, digits),
            row.optimal_n_df,
            format_float(row.af_df_ratio, digits),
        ))
    return buf.getvalue()


def write_csv(text: str, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
