"""Command-line interface.

Subcommands: prepare (annotate an edge list), select (run one selection
algorithm), evaluate (spread of a stored seed set), sweep (budget sweep from
a config file), stats (dataset statistics).  Exit codes: 0 ok, 1 runtime
error, 2 usage error.
"""

import argparse
import sys
from pathlib import Path

from .diffusion import SimulationParams, dump_trials, estimate_spread
from .errors import InfmaxError
from .graphs import (ProbabilitySetting, assign_costs,
                     assign_delay_distributions, assign_probabilities,
                     assign_thresholds, graph_stats, load_edge_list,
                     read_annotated, write_annotated, write_label_map)
from .harness import (ALGORITHMS, compare_report, emit_csv, parse_config,
                      run_selection, run_sweep)
from .selection import NAIVE_SIZE_WARNING, read_seed_set, write_seed_set

DEFAULT_T = 10
DEFAULT_R = 10000


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _nonnegative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _parse_costs(text):
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected lo:hi") from None
    return lo, hi


def _parse_delay(text):
    parts = text.split(":")
    if len(parts) != 4 or parts[0] != "poisson":
        raise argparse.ArgumentTypeError("expected poisson:lmin:lmax:max_offset")
    return int(parts[1]), int(parts[2]), int(parts[3])


def _apply_threads(threads):
    if threads is not None:
        import numba

        numba.set_num_threads(threads)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="infmax",
        description="Budgeted influence maximization under delay-aware "
                    "cascades with a diffusion deadline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="annotate an edge list")
    p.add_argument("--edges", required=True, help="edge-list file")
    p.add_argument("--out", required=True, help="annotated-graph output path")
    p.add_argument("--prob", default="uniform:0.1",
                   help="uniform:P | trivalency | fromfile")
    p.add_argument("--costs", type=_parse_costs, default=(50, 100),
                   metavar="LO:HI", help="integer cost interval")
    p.add_argument("--delay", type=_parse_delay, default=(1, 20, 10),
                   metavar="poisson:LMIN:LMAX:MAXOFF",
                   help="per-node Poisson delay parameters")
    p.add_argument("--thresholds", choices=("zero", "uniform"), default="zero")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--T-note", dest="t_note", type=int, default=None,
                   help="intended deadline, recorded as a comment")
    p.add_argument("--undirected", action="store_true",
                   help="materialize both directions of each input edge")

    p = sub.add_parser("select", help="run one selection algorithm")
    p.add_argument("--graph", required=True, help="annotated-graph file")
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--budget", type=_nonnegative_int, required=True)
    p.add_argument("--T", type=_nonnegative_int, default=DEFAULT_T)
    p.add_argument("--R", type=_positive_int, default=DEFAULT_R)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="seed-set output path")
    p.add_argument("--threads", type=_positive_int, default=None)

    p = sub.add_parser("evaluate", help="estimate the spread of a seed set")
    p.add_argument("--graph", required=True, help="annotated-graph file")
    p.add_argument("--seeds", required=True, help="seed-set file")
    p.add_argument("--T", type=_nonnegative_int, default=DEFAULT_T)
    p.add_argument("--R", type=_positive_int, default=DEFAULT_R)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump-trials", default=None,
                   help="write per-trial influenced sets to this file")
    p.add_argument("--threads", type=_positive_int, default=None)

    p = sub.add_parser("sweep", help="run a budget sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default=".",
                   help="directory for the CSV, report, and seed files")
    p.add_argument("--csv-name", default="sweep.csv")
    p.add_argument("--threads", type=_positive_int, default=None)

    p = sub.add_parser("stats", help="print dataset statistics")
    p.add_argument("--input", required=True,
                   help="edge-list or annotated-graph file")
    p.add_argument("--undirected", action="store_true")
    return parser


def _load_graph_arg(path):
    """Accept either an annotated graph or a raw edge list."""
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line == "[nodes]":
                return read_annotated(path)
            break
    return load_edge_list(path)


def cmd_prepare(args):
    g = load_edge_list(args.edges, directed=not args.undirected)
    setting = ProbabilitySetting.parse(args.prob)
    g = assign_probabilities(g, setting, args.seed)
    lo, hi = args.costs
    g = assign_costs(g, lo, hi, args.seed)
    lmin, lmax, moff = args.delay
    g = assign_delay_distributions(g, lmin, lmax, moff, args.seed)
    g = assign_thresholds(g, args.thresholds, args.seed)
    note = None if args.t_note is None else f"T={args.t_note}"
    write_annotated(g, args.out, note=note)
    write_label_map(g, str(args.out) + ".labels")
    s = graph_stats(g)
    print(f"wrote {args.out} (labels: {args.out}.labels)")
    print(f"n={s.n} m={s.m} avg_degree={s.avg_degree:.3f} "
          f"max_out_degree={s.max_out_degree}")
    return 0


def cmd_select(args):
    _apply_threads(args.threads)
    g = read_annotated(args.graph)
    if args.algo == "naive" and g.n > NAIVE_SIZE_WARNING:
        print(f"warning: naive greedy on {g.n} nodes is expected to be "
              "infeasibly slow; proceeding anyway", file=sys.stderr)
    params = SimulationParams(args.T, args.R, args.seed)
    report = run_selection(g, args.algo, args.budget, params)
    write_seed_set(g, report.seed_set, args.out)
    print(f"seeds={len(report.seed_set.nodes)} "
          f"total_cost={report.seed_set.total_cost} "
          f"selection_seconds={report.wall_time:.4f}")
    return 0


def cmd_evaluate(args):
    _apply_threads(args.threads)
    g = read_annotated(args.graph)
    seeds = read_seed_set(g, args.seeds)
    params = SimulationParams(args.T, args.R, args.seed)
    est = estimate_spread(g, seeds, params)
    if args.dump_trials:
        dump_trials(g, seeds, params, args.dump_trials)
    print(f"mean={est.mean:.4f} stddev={est.sample_stddev:.4f} "
          f"trials={est.trials}")
    return 0


def cmd_sweep(args):
    _apply_threads(args.threads)
    config = parse_config(args.config)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = run_sweep(config, out_dir=out_dir)
    csv_path = out_dir / args.csv_name
    emit_csv(results, csv_path)
    print(f"wrote {csv_path} ({len(results)} rows)")
    try:
        report = compare_report(results)
    except InfmaxError:
        report = None  # fewer than two algorithms share a budget
    if report is not None:
        report_path = out_dir / "compare.txt"
        report_path.write_text(report, encoding="utf-8")
        print(f"wrote {report_path}")
    return 0


def cmd_stats(args):
    if args.undirected:
        g = load_edge_list(args.input, directed=False)
    else:
        g = _load_graph_arg(args.input)
    s = graph_stats(g)
    print(f"n={s.n} m={s.m} avg_degree={s.avg_degree:.3f} "
          f"max_out_degree={s.max_out_degree}")
    return 0


_COMMANDS = {
    "prepare": cmd_prepare,
    "select": cmd_select,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "stats": cmd_stats,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (InfmaxError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
