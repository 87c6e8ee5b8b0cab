"""Budget sweeps over (algorithm, budget) cells with CSV output.

A sweep annotates the graph once (probabilities, costs, delays, thresholds
all derived from the master seed), then for every algorithm and budget runs
the selection, times it, and re-evaluates the returned seed set with a
high-trial spread estimate.  Everything except wall-clock timing is a pure
function of the configuration.
"""

import time
from dataclasses import dataclass, field
from pathlib import Path

from .baselines import baseline_ddh, baseline_deg, baseline_irie, baseline_sdh
from .diffusion import SimulationParams, estimate_spread
from .errors import ConfigError, InfmaxError
from .graphs import (ProbabilitySetting, assign_costs,
                     assign_delay_distributions, assign_probabilities,
                     assign_thresholds, load_edge_list)
from .selection import (SelectionReport, celf_pp, greedy_approx, greedy_naive,
                        lazy_greedy, write_seed_set)

ALGORITHMS = ("naive", "approx", "lazy-sim", "lazy-approx", "celfpp",
              "deg", "ddh", "sdh", "irie")
BASELINE_ALGORITHMS = ("deg", "ddh", "sdh", "irie")

CSV_HEADER = ("dataset,algorithm,budget,spread_mean,spread_stddev,"
              "selection_seconds,evaluation_trials,seed_set_path")


@dataclass(frozen=True)
class ExperimentConfig:
    graph_path: str
    budgets: tuple
    algorithms: tuple
    probability: ProbabilitySetting = ProbabilitySetting("uniform", 0.1)
    directed: bool = True
    cost_lo: int = 50
    cost_hi: int = 100
    deadline_T: int = 10
    lambda_min: int = 1
    lambda_max: int = 20
    max_offset: int = 10
    selection_trials_R: int = 1000
    evaluation_trials_R: int = 10000
    master_seed: int = 0
    threshold_mode: str = "zero"
    timed: bool = True

    def __post_init__(self):
        if not self.budgets:
            raise ConfigError("budgets must be non-empty")
        if any(b2 <= b1 for b1, b2 in zip(self.budgets, self.budgets[1:])):
            raise ConfigError("budgets must be strictly increasing")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {name!r}")
        if self.threshold_mode not in ("zero", "uniform"):
            raise ConfigError(f"unknown threshold_mode {self.threshold_mode!r}")


@dataclass
class SweepResult:
    dataset: str
    algorithm: str
    budget: int
    spread_mean: float
    spread_stddev: float
    selection_seconds: float
    evaluation_trials: int
    seed_set_path: str
    n_nodes: int = 0  # carried for reporting; not part of the CSV schema
    seed_nodes: list = field(default_factory=list)


_BOOL = {"true": True, "false": False, "1": True, "0": False,
         "yes": True, "no": False}


def _parse_bool(value, key, lineno):
    try:
        return _BOOL[value.strip().lower()]
    except KeyError:
        raise ConfigError(f"line {lineno}: key {key!r}: bad boolean "
                          f"{value!r}") from None


def parse_config(path):
    """Read the flat key=value config format ('#' comments)."""
    values = {}
    lines = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key=value")
            key, value = (t.strip() for t in line.split("=", 1))
            values[key] = value
            lines[key] = lineno

    def take(key, conv, default=None, required=False):
        if key not in values:
            if required:
                raise ConfigError(f"missing required key {key!r}")
            return default
        raw = values.pop(key)
        try:
            return conv(raw)
        except ConfigError:
            raise
        except Exception as exc:
            raise ConfigError(
                f"line {lines[key]}: key {key!r}: {exc}"
            ) from None

    cfg = dict(
        graph_path=take("graph_path", str, required=True),
        budgets=take("budgets",
                     lambda s: tuple(int(t) for t in s.split(",") if t.strip()),
                     required=True),
        algorithms=take("algorithms",
                        lambda s: tuple(t.strip() for t in s.split(",")
                                        if t.strip()),
                        required=True),
        probability=take("probability", ProbabilitySetting.parse,
                         ProbabilitySetting("uniform", 0.1)),
        directed=take("directed", lambda s: _parse_bool(s, "directed",
                                                        lines.get("directed", 0)),
                      True),
        cost_lo=take("cost_lo", int, 50),
        cost_hi=take("cost_hi", int, 100),
        deadline_T=take("deadline_T", int, 10),
        lambda_min=take("lambda_min", int, 1),
        lambda_max=take("lambda_max", int, 20),
        max_offset=take("max_offset", int, 10),
        selection_trials_R=take("selection_trials_R", int, 1000),
        evaluation_trials_R=take("evaluation_trials_R", int, 10000),
        master_seed=take("master_seed", int, 0),
        threshold_mode=take("threshold_mode", str, "zero"),
        timed=take("timed", lambda s: _parse_bool(s, "timed",
                                                  lines.get("timed", 0)),
                   True),
    )
    if values:
        key = next(iter(values))
        raise ConfigError(f"line {lines[key]}: unknown key {key!r}")
    return ExperimentConfig(**cfg)


def annotate_graph(config):
    """Load and annotate the sweep's graph: one annotation shared by every
    (algorithm, budget) cell so comparisons are paired."""
    g = load_edge_list(config.graph_path, directed=config.directed)
    if g.n == 0:
        raise InfmaxError("cannot sweep an empty graph")
    g = assign_probabilities(g, config.probability, config.master_seed)
    g = assign_costs(g, config.cost_lo, config.cost_hi, config.master_seed)
    g = assign_delay_distributions(g, config.lambda_min, config.lambda_max,
                                   config.max_offset, config.master_seed)
    g = assign_thresholds(g, config.threshold_mode, config.master_seed)
    return g


def run_selection(g, algorithm, budget, params):
    """Dispatch one selection; baselines are wrapped into a timed report."""
    if algorithm == "naive":
        return greedy_naive(g, budget, params)
    if algorithm == "approx":
        return greedy_approx(g, budget, params)
    if algorithm == "lazy-sim":
        return lazy_greedy(g, budget, params, gain_mode="simulation")
    if algorithm == "lazy-approx":
        return lazy_greedy(g, budget, params, gain_mode="approx")
    if algorithm == "celfpp":
        return celf_pp(g, budget, params)
    heuristics = {"deg": baseline_deg, "ddh": baseline_ddh,
                  "sdh": baseline_sdh, "irie": baseline_irie}
    if algorithm not in heuristics:
        raise InfmaxError(f"unknown algorithm {algorithm!r}")
    t0 = time.perf_counter()
    seed_set = heuristics[algorithm](g, budget)
    return SelectionReport(seed_set, 0, time.perf_counter() - t0)


def run_sweep(config, out_dir=None):
    """Run every (algorithm, budget) cell; returns one SweepResult each.

    Selection runs with selection_trials_R; the returned seed set is then
    re-evaluated with evaluation_trials_R.  Seed sets are written under
    out_dir when given.
    """
    g = annotate_graph(config)
    dataset = Path(config.graph_path).stem
    sel_params = SimulationParams(config.deadline_T, config.selection_trials_R,
                                  config.master_seed)
    eval_params = SimulationParams(config.deadline_T,
                                   config.evaluation_trials_R,
                                   config.master_seed)
    results = []
    for algorithm in config.algorithms:
        for budget in config.budgets:
            report = run_selection(g, algorithm, budget, sel_params)
            seeds = report.seed_set.nodes
            if seeds:
                est = estimate_spread(g, seeds, eval_params)
                mean, std = est.mean, est.sample_stddev
            else:
                mean, std = 0.0, 0.0
            path = ""
            if out_dir is not None:
                out = Path(out_dir)
                out.mkdir(parents=True, exist_ok=True)
                # recorded relative to out_dir so the CSV is run-location
                # independent (and byte-stable across reruns)
                path = f"{dataset}_{algorithm}_{budget}.seeds"
                write_seed_set(g, report.seed_set, out / path)
            results.append(SweepResult(
                dataset=dataset,
                algorithm=algorithm,
                budget=int(budget),
                spread_mean=mean,
                spread_stddev=std,
                selection_seconds=report.wall_time if config.timed else 0.0,
                evaluation_trials=config.evaluation_trials_R,
                seed_set_path=path,
                n_nodes=g.n,
                seed_nodes=list(seeds),
            ))
    return results


def emit_csv(results, path):
    """Write the sweep CSV: fixed header, 4-decimal floats, rows sorted by
    (dataset, algorithm, budget)."""
    if not results:
        raise InfmaxError("no sweep results to write")
    rows = sorted(results, key=lambda r: (r.dataset, r.algorithm, r.budget))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(f"{r.dataset},{r.algorithm},{r.budget},"
                     f"{r.spread_mean:.4f},{r.spread_stddev:.4f},"
                     f"{r.selection_seconds:.4f},{r.evaluation_trials},"
                     f"{r.seed_set_path}\n")


def compare_report(results):
    """Per-budget ranking with percentage gaps.

    For each budget shared by at least two algorithms, algorithms are ranked
    by evaluated spread; every non-baseline algorithm is compared against the
    best of the baseline heuristics, as a percentage of the node count and
    relative to that baseline."""
    by_budget = {}
    for r in results:
        by_budget.setdefault(r.budget, []).append(r)
    shared = {b: rs for b, rs in by_budget.items() if len(rs) >= 2}
    if not shared:
        raise InfmaxError("need at least two algorithms at a shared budget")
    lines = []
    for budget in sorted(shared):
        rows = sorted(shared[budget], key=lambda r: (-r.spread_mean, r.algorithm))
        n = max(r.n_nodes for r in rows)
        lines.append(f"budget={budget} (n={n})")
        for rank, r in enumerate(rows, 1):
            lines.append(f"  {rank}. {r.algorithm:<12} "
                         f"spread={r.spread_mean:.4f}")
        baselines = [r for r in rows if r.algorithm in BASELINE_ALGORITHMS]
        proposed = [r for r in rows if r.algorithm not in BASELINE_ALGORITHMS]
        if baselines and proposed:
            best_base = max(baselines, key=lambda r: r.spread_mean)
            for r in proposed:
                gap = r.spread_mean - best_base.spread_mean
                pct_n = 100.0 * gap / n if n else 0.0
                pct_rel = (100.0 * gap / best_base.spread_mean
                           if best_base.spread_mean else 0.0)
                lines.append(
                    f"  {r.algorithm} vs best baseline ({best_base.algorithm}): "
                    f"{gap:+.4f} ({pct_n:.2f}% of n, {pct_rel:.2f}% relative)")
    return "\n".join(lines) + "\n"
