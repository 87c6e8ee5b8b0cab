"""Budgeted influence maximization under delay-aware cascades with a
hard diffusion deadline."""

from .baselines import baseline_ddh, baseline_deg, baseline_irie, baseline_sdh
from .diffusion import (SimulationParams, SpreadEstimate,
                        combined_activation_prob, estimate_spread,
                        simulate_trial, trial_stream)
from .errors import (ConfigError, EnumerationCapError, GraphFormatError,
                     InfmaxError)
from .graphs import (DelayDistribution, Graph, ProbabilitySetting,
                     assign_costs, assign_delay_distributions,
                     assign_probabilities, assign_thresholds, graph_stats,
                     load_edge_list, read_annotated, truncated_poisson_pmf,
                     validate_graph, write_annotated, write_edge_list)
from .harness import (ExperimentConfig, SweepResult, compare_report, emit_csv,
                      parse_config, run_sweep)
from .oracle import exact_spread, exact_spread_all_subsets
from .selection import (GainEntry, SeedSet, SelectionReport,
                        approx_marginal_gain, celf_pp, greedy_approx,
                        greedy_naive, lazy_greedy, read_seed_set,
                        write_seed_set)

__version__ = "0.1.0"
