"""Config-driven budget sweep producing the experiment CSV and report.

Writes a synthetic edge list and a sweep config next to it, runs the sweep,
and prints the CSV plus the per-budget comparison.  The same flow works on
real datasets via `infmax sweep --config <file>`.
"""

import tempfile
from pathlib import Path

import numpy as np

from infmax import compare_report, emit_csv, parse_config, run_sweep

work = Path(tempfile.mkdtemp(prefix="infmax_sweep_"))

rng = np.random.default_rng(3)
edges = set()
while len(edges) < 600:
    a, b = (int(x) for x in rng.integers(0, 120, 2))
    if a != b:
        edges.add((a, b))
graph_path = work / "synthetic.txt"
graph_path.write_text("".join(f"{a} {b}\n" for a, b in sorted(edges)))

config_path = work / "sweep.cfg"
config_path.write_text(f"""\
# synthetic sweep: two proposed selectors against two heuristics
graph_path={graph_path}
budgets=400,800,1200,1600
algorithms=approx,celfpp,deg,irie
probability=uniform:0.1
cost_lo=50
cost_hi=100
deadline_T=10
lambda_min=1
lambda_max=20
max_offset=10
selection_trials_R=300
evaluation_trials_R=3000
master_seed=11
""")

config = parse_config(config_path)
results = run_sweep(config, out_dir=work)
emit_csv(results, work / "sweep.csv")

print((work / "sweep.csv").read_text())
print(compare_report(results))
print(f"outputs under {work}")
