import os
import warnings
from pathlib import Path

import numpy as np
import pytest

from infmax.graphs import build_graph

warnings.filterwarnings("ignore", message=".*TBB.*")

DATA_ENV = "INFMAX_DATA_DIR"


def dataset_path(name):
    """Path of a user-supplied dataset file, or None if absent."""
    root = Path(os.environ.get(DATA_ENV,
                               Path(__file__).resolve().parent.parent / "data"))
    p = root / name
    return p if p.exists() else None


def require_dataset(name):
    p = dataset_path(name)
    if p is None:
        pytest.skip(f"dataset {name} not present (set {DATA_ENV} or put it "
                    f"under ./data)")
    return p


def random_delay_row(rng, max_offset):
    l = int(rng.integers(1, max_offset + 1))
    w = rng.random(l) + 0.05
    return tuple(w / w.sum())


def random_instance(rng, max_nodes=6, max_edges=10, max_offset=3,
                    unit_cost=True, max_cost=5, prob_lo=0.05, prob_hi=1.0):
    """Small random annotated graph for enumeration-backed tests."""
    n = int(rng.integers(2, max_nodes + 1))
    cap = min(max_edges, n * (n - 1))
    m = int(rng.integers(1, cap + 1))
    edges = set()
    while len(edges) < m:
        a = int(rng.integers(0, n))
        b = int(rng.integers(0, n))
        if a != b:
            edges.add((a, b))
    src, dst = zip(*sorted(edges))
    prob = rng.uniform(prob_lo, prob_hi, len(src))
    rows = [random_delay_row(rng, max_offset) for _ in src]
    cost = (np.ones(n, dtype=np.int64) if unit_cost
            else rng.integers(1, max_cost + 1, n).astype(np.int64))
    return build_graph(n, src, dst, prob, delay_rows=rows, cost=cost)


def random_midsize_graph(rng, n_lo=20, n_hi=300, avg_deg=3.0,
                         prob_lo=0.05, prob_hi=0.5, max_cost=10,
                         max_offset=3):
    n = int(rng.integers(n_lo, n_hi + 1))
    m_target = max(1, int(n * avg_deg))
    edges = set()
    tries = 0
    while len(edges) < m_target and tries < 20 * m_target:
        a = int(rng.integers(0, n))
        b = int(rng.integers(0, n))
        tries += 1
        if a != b:
            edges.add((a, b))
    src, dst = zip(*sorted(edges))
    prob = rng.uniform(prob_lo, prob_hi, len(src))
    rows = [random_delay_row(rng, max_offset) for _ in src]
    cost = rng.integers(1, max_cost + 1, n).astype(np.int64)
    return build_graph(n, src, dst, prob, delay_rows=rows, cost=cost)


def path_graph(probs, delay_rows=None):
    """Directed path 0 -> 1 -> ... with the given edge probabilities."""
    n = len(probs) + 1
    src = list(range(n - 1))
    dst = list(range(1, n))
    return build_graph(n, src, dst, probs, delay_rows=delay_rows)


def star_graph(k, prob, delay_row=(1.0,)):
    """Center 0 with k leaves, all edges with the same probability."""
    return build_graph(k + 1, [0] * k, list(range(1, k + 1)), [prob] * k,
                       delay_rows=[delay_row] * k)
