"""Full pipeline on the Email-Eu-core dataset (if present).

Expects data/email-Eu-core.txt (or $INFMAX_DATA_DIR/email-Eu-core.txt);
prints download instructions and exits gracefully otherwise.  Uses the
standard setting: uniform probability 0.1, costs in [50, 100], per-node
Poisson delays with parameter in {1..20} truncated at offset 10, deadline
10, evaluation with 10000 trials.
"""

import os
import sys
import time
from pathlib import Path

from infmax import (ProbabilitySetting, SimulationParams, assign_costs,
                    assign_delay_distributions, assign_probabilities,
                    assign_thresholds, baseline_ddh, baseline_deg,
                    baseline_irie, baseline_sdh, celf_pp, estimate_spread,
                    graph_stats, greedy_approx, lazy_greedy, load_edge_list)

root = Path(os.environ.get("INFMAX_DATA_DIR",
                           Path(__file__).resolve().parent.parent / "data"))
path = root / "email-Eu-core.txt"
if not path.exists():
    print(f"dataset not found: {path}\n"
          "download email-Eu-core.txt from the SNAP collection and place it "
          "there (or point INFMAX_DATA_DIR at its directory)")
    sys.exit(0)

g = load_edge_list(path)
print("loaded:", graph_stats(g))

seed = 20260811
g = assign_probabilities(g, ProbabilitySetting("uniform", 0.1), seed)
g = assign_costs(g, 50, 100, seed)
g = assign_delay_distributions(g, 1, 20, 10, seed)
g = assign_thresholds(g, "zero")

budget = 16000
select = SimulationParams(deadline_T=10, trials_R=1000, master_seed=seed)
evaluate = SimulationParams(deadline_T=10, trials_R=10_000, master_seed=seed)

selectors = [
    ("approx", lambda: greedy_approx(g, budget, select).seed_set),
    ("lazy-approx", lambda: lazy_greedy(g, budget, select, "approx").seed_set),
    ("celfpp", lambda: celf_pp(g, budget, select).seed_set),
    ("lazy-sim", lambda: lazy_greedy(g, budget, select,
                                     "simulation").seed_set),
    ("deg", lambda: baseline_deg(g, budget)),
    ("ddh", lambda: baseline_ddh(g, budget)),
    ("sdh", lambda: baseline_sdh(g, budget)),
    ("irie", lambda: baseline_irie(g, budget)),
]

print(f"\nbudget={budget}, deadline T=10")
print(f"{'algorithm':<12} {'spread':>9} {'seeds':>6} {'seconds':>9}")
for name, run in selectors:
    t0 = time.perf_counter()
    ss = run()
    dt = time.perf_counter() - t0
    spread = estimate_spread(g, ss.nodes, evaluate).mean
    print(f"{name:<12} {spread:>9.2f} {len(ss.nodes):>6} {dt:>9.2f}")
