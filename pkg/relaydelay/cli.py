"""
relaydelay command-line interface.

Commands:
    relaydelay plan --config net.json       Delay-optimal AF/DF assignment
    relaydelay sweep --config net.json ...  AF vs DF vs optimal delay over a grid (CSV)
    relaydelay oracle --config net.json     Exhaustive 2^H search (H <= 20)
    relaydelay feedback --config net.json   Active noisy feedback exponent and delay

Exit codes: 0 success, 1 usage or parse error, 2 infeasible or refused computation.
"""

import argparse
import csv
import io
import logging
import math
import sys
from typing import List, Optional

from .config import settings
from .errors import (
    ChannelDomainError,
    ConfigError,
    OracleRefusedError,
    PartitionError,
    RelayDelayError,
    SweepParameterError,
)
from .feedback import (
    P2PReference,
    feedback_exponent,
    no_feedback_binary_delay,
    relay_beats_p2p,
)
from .netconfig import parse_config
from .planner import (
    SchemePlan,
    SegmentCostTable,
    brute_force_oracle,
    optimize,
    parse_assignment,
    threshold_baseline,
)
from .sweep import find_crossovers, format_float, parse_grid, parse_values, rows_to_csv, run_sweep, write_csv

logger = logging.getLogger("relaydelay.cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REFUSED = 2

ORACLE_RTOL = 1e-9

PLAN_CSV_COLUMNS = ("segment", "start", "k_af", "gamma", "rho", "delta", "codelength")


class ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; usage errors here are exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _delay_text(n: float, symbol_rate: Optional[float]) -> str:
    text = f"{n:.6f} channel uses"
    if symbol_rate:
        text += f" ({n / symbol_rate:.6g} s at {symbol_rate:g} symbols/s)"
    return text


def format_plan(plan: SchemePlan, title: str, symbol_rate: Optional[float] = None) -> str:
    lines = [f"[{title}] H={plan.relay_count} N_DF={plan.n_df}"]
    if plan.relay_count == 0:
        lines.append("  source: DF(trivially)")
    else:
        lines.append("  source: DF")
        for j, tag in enumerate(plan.assignment, start=1):
            lines.append(f"  relay {j}: {tag.value}")
    lines.append("")
    lines.append(f"  {'seg':<5}{'start':>6}{'K':>4}{'gamma':>16}{'rho':>12}{'delta':>12}{'codelength':>16}")
    lines.append("  " + "-" * 71)
    for i, (seg, bound) in enumerate(zip(plan.segments, plan.per_segment), start=1):
        lines.append(
            f"  {i:<5}{seg.start:>6}{seg.k_af:>4}{bound.snr_used:>16.6g}{bound.rho:>12.6f}"
            f"{bound.delta_used:>12.3g}{bound.codelength:>16.6f}"
        )
    lines.append("")
    lines.append(f"  Total delay: {_delay_text(plan.total_delay, symbol_rate)}")
    return "\n".join(lines)


def plan_to_csv(plan: SchemePlan, digits: Optional[int] = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PLAN_CSV_COLUMNS)
    for i, (seg, bound) in enumerate(zip(plan.segments, plan.per_segment), start=1):
        writer.writerow((
            i,
            seg.start,
            seg.k_af,
            format_float(bound.snr_used, digits),
            format_float(bound.rho, digits),
            format_float(bound.delta_used, digits),
            format_float(bound.codelength, digits),
        ))
    writer.writerow(("total", "", "", "", "", "", format_float(plan.total_delay, digits)))
    return buf.getvalue()


def _plans_agree(a: SchemePlan, b: SchemePlan) -> bool:
    return a.assignment == b.assignment and math.isclose(
        a.total_delay, b.total_delay, rel_tol=ORACLE_RTOL
    )


def cmd_plan(args) -> int:
    cfg = parse_config(args.config)
    net, budget = cfg.network(), cfg.budget()
    costs = SegmentCostTable(net, budget)

    plan = optimize(net, budget, costs=costs)
    print(format_plan(plan, "optimal", args.symbol_rate))

    if args.assignment is not None:
        try:
            fixed = costs.plan(parse_assignment(args.assignment))
        except (ChannelDomainError, PartitionError) as e:
            raise ConfigError(f"--assignment: {e}", field="assignment") from e
        print()
        print(format_plan(fixed, "fixed assignment", args.symbol_rate))
        print(f"  Excess over optimal: {fixed.total_delay - plan.total_delay:.6f} channel uses")

    if args.baseline_threshold is not None:
        baseline = threshold_baseline(net, budget, args.baseline_threshold, costs=costs)
        print()
        print(format_plan(baseline, f"SNR-threshold baseline, threshold={args.baseline_threshold:g}",
                          args.symbol_rate))
        print(f"  Excess over optimal: {baseline.total_delay - plan.total_delay:.6f} channel uses")

    status = EXIT_OK
    if args.oracle:
        oracle = brute_force_oracle(net, budget)
        print()
        if _plans_agree(plan, oracle):
            print(f"oracle agrees ({2 ** net.relay_count} assignments checked)")
        else:
            print(f"oracle DISAGREES: oracle {oracle.label()} {oracle.total_delay:.6f} "
                  f"vs optimize {plan.label()} {plan.total_delay:.6f}")
            status = EXIT_REFUSED

    if args.csv:
        write_csv(plan_to_csv(plan), args.csv)
        print(f"\nWrote {args.csv}")
    return status


def cmd_oracle(args) -> int:
    cfg = parse_config(args.config)
    net, budget = cfg.network(), cfg.budget()
    oracle = brute_force_oracle(net, budget)
    print(format_plan(oracle, "oracle", args.symbol_rate))
    if args.csv:
        write_csv(plan_to_csv(oracle), args.csv)
        print(f"\nWrote {args.csv}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = parse_config(args.config)
    if args.values is not None:
        values = parse_values(args.values)
    elif args.grid is not None:
        values = parse_grid(args.grid, args.spacing)
    else:
        raise SweepParameterError("sweep needs --grid or --values", field="grid")

    rows = run_sweep(cfg.network(), cfg.budget(), args.parameter, values)
    text = rows_to_csv(rows, args.parameter)
    if not args.csv:
        sys.stdout.write(text)
        return EXIT_OK

    write_csv(text, args.csv)
    print(f"{args.parameter:>14} {'all-AF':>14} {'all-DF':>14} {'optimal':>14} {'N_DF':>5}")
    print("-" * 65)
    for row in rows:
        print(f"{row.value:>14.6g} {row.all_af_delay:>14.6f} {row.all_df_delay:>14.6f} "
              f"{row.optimal_delay:>14.6f} {row.optimal_n_df:>5}")
    crossings = find_crossovers(rows)
    if crossings:
        for lo, hi in crossings:
            print(f"AF/DF crossover between {lo:.6g} and {hi:.6g}")
    else:
        print("No AF/DF crossover on this grid.")
    print(f"\nWrote {args.csv}")
    return EXIT_OK


def _p2p_reference(args) -> Optional[P2PReference]:
    given = [args.p2p_forward_noise, args.p2p_forward_gain, args.p2p_feedback_noise, args.p2p_feedback_gain]
    if all(v is None for v in given):
        return None
    if any(v is None for v in given):
        raise ConfigError(
            "point-to-point comparison needs --p2p-forward-noise, --p2p-forward-gain, "
            "--p2p-feedback-noise and --p2p-feedback-gain",
            field="p2p",
        )
    return P2PReference(
        forward_noise_var=args.p2p_forward_noise,
        forward_gain=args.p2p_forward_gain,
        feedback_noise_var=args.p2p_feedback_noise,
        feedback_gain=args.p2p_feedback_gain,
    )


def cmd_feedback(args) -> int:
    cfg = parse_config(args.config)
    fs = cfg.feedback_spec()
    p2p = _p2p_reference(args)

    fb = feedback_exponent(fs, cfg.delta_e)
    n_plain = no_feedback_binary_delay(fs.forward, cfg.delta_e)

    rows = [
        ("sigma_f_sq", fb.sigma_f_sq),
        ("sigma_fb_sq", fb.sigma_fb_sq),
        ("exponent", fb.exponent),
        ("feedback_delay", fb.codelength),
        ("no_feedback_delay", n_plain),
    ]
    print(f"[feedback] H={fs.forward.relay_count} delta_e={cfg.delta_e:g}")
    print(f"  sigma_F^2            {fb.sigma_f_sq:.12g}")
    print(f"  sigma_FB^2           {fb.sigma_fb_sq:.12g}")
    print(f"  E_FB                 {fb.exponent:.12g}")
    print(f"  n_FB                 {_delay_text(fb.codelength, args.symbol_rate)}")
    print(f"  n without feedback   {_delay_text(n_plain, args.symbol_rate)}")
    verdict = "yes" if fb.codelength < n_plain else "no"
    print(f"  feedback delay < no-feedback delay: {verdict}")

    if p2p is not None:
        beats = relay_beats_p2p(fs, p2p, high_snr=args.high_snr)
        regime = "high-SNR unit-noise" if args.high_snr else "exact"
        print(f"  relay chain beats point-to-point ({regime}): {'yes' if beats else 'no'}")
        rows.append(("relay_beats_p2p", 1 if beats else 0))

    if args.csv:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("quantity", "value"))
        for name, value in rows:
            writer.writerow((name, format_float(value) if isinstance(value, float) else value))
        write_csv(buf.getvalue(), args.csv)
        print(f"\nWrote {args.csv}")
    return EXIT_OK


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="Network description (JSON)")
    common.add_argument("--csv", default=None, help="Write machine-readable CSV to this path")
    common.add_argument("--symbol-rate", type=float, default=None,
                        help="Symbols per second; also report delays in seconds")
    common.add_argument("--debug", action="store_true", help="Enable debug logging")

    parser = ArgumentParser(
        prog="relaydelay",
        description="Delay-optimal AF/DF relay planning for Gaussian multihop chains",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="Use 'relaydelay <command> --help' for more info on a command.",
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    # Plan
    parser_plan = subparsers.add_parser("plan", parents=[common], help="Find the delay-optimal assignment")
    parser_plan.add_argument("--oracle", action="store_true", help="Cross-check against exhaustive search")
    parser_plan.add_argument("--baseline-threshold", type=float, default=None,
                             help="Compare with the SNR-threshold policy at this SNR")
    parser_plan.add_argument("--assignment", default=None, help="Also evaluate a fixed assignment, e.g. AF,DF,AF")

    # Sweep
    parser_sweep = subparsers.add_parser("sweep", parents=[common], help="Sweep one parameter over a grid")
    parser_sweep.add_argument("--parameter", required=True,
                              help="gain-scale, power-scale, delta_e or bits")
    parser_sweep.add_argument("--grid", default=None, help="start:stop:count")
    parser_sweep.add_argument("--values", default=None, help="Comma-separated grid values")
    parser_sweep.add_argument("--spacing", default="log", choices=("log", "linear"), help="Grid spacing")

    # Oracle
    subparsers.add_parser("oracle", parents=[common], help="Exhaustive search over all 2^H assignments")

    # Feedback
    parser_fb = subparsers.add_parser("feedback", parents=[common], help="Active noisy feedback analysis")
    parser_fb.add_argument("--p2p-forward-noise", type=float, default=None)
    parser_fb.add_argument("--p2p-forward-gain", type=float, default=None)
    parser_fb.add_argument("--p2p-feedback-noise", type=float, default=None)
    parser_fb.add_argument("--p2p-feedback-gain", type=float, default=None)
    parser_fb.add_argument("--high-snr", action="store_true",
                           help="Use the unit-noise high-SNR comparison condition")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    commands = {
        "plan": cmd_plan,
        "sweep": cmd_sweep,
        "oracle": cmd_oracle,
        "feedback": cmd_feedback,
    }
    handler = commands.get(args.command)
    if handler is None:
        parser.print_help()
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if (args.debug or settings.DEBUG) else logging.WARNING,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )
    if args.symbol_rate is not None and not args.symbol_rate > 0:
        print("Error: --symbol-rate must be > 0", file=sys.stderr)
        return EXIT_USAGE

    try:
        return handler(args)
    except (ConfigError, SweepParameterError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OracleRefusedError as e:
        print(f"Refused: {e}", file=sys.stderr)
        return EXIT_REFUSED
    except RelayDelayError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_REFUSED
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
