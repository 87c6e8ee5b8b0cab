"""Heuristic baselines: degree, degree-discount, single-discount, and an
iterative influence-rank heuristic.

None of these touch the spread estimator; they rank nodes from the graph
structure (and edge probabilities) alone.  All obey the shared budget
contract: add affordable nodes greedily, ties to the lower node id.
"""

import numpy as np

from .errors import InfmaxError
from .selection import SeedSet

IRIE_ALPHA = 0.7
IRIE_ITERATIONS = 20


def _check_budget(budget):
    if budget < 0:
        raise InfmaxError("budget must be >= 0")
    return int(budget)


def baseline_deg(g, budget):
    """Highest out-degree first; walk the fixed order adding whatever fits."""
    budget = _check_budget(budget)
    degs = g.out_degrees()
    order = sorted(range(g.n), key=lambda v: (-degs[v], v))
    nodes = []
    total = 0
    for v in order:
        c = int(g.cost[v])
        if total + c <= budget:
            nodes.append(v)
            total += c
    return SeedSet(nodes, total, budget)


def _discount_select(g, budget, discounted_degree):
    """Shared loop for the discount heuristics: pick the affordable node with
    the maximum current discounted degree, then let the caller-supplied
    update refresh the out-neighborhood."""
    budget = _check_budget(budget)
    degs = g.out_degrees().astype(np.float64)
    t = np.zeros(g.n, dtype=np.int64)  # selected in-neighbors per node
    dd = degs.copy()
    selected = np.zeros(g.n, dtype=bool)
    nodes = []
    total = 0
    neg_inf = -np.inf
    while True:
        masked = np.where(selected | (g.cost > budget - total), neg_inf, dd)
        u = int(np.argmax(masked))
        if masked[u] == neg_inf:
            break
        nodes.append(u)
        selected[u] = True
        total += int(g.cost[u])
        for k in range(g.out_ptr[u], g.out_ptr[u + 1]):
            w = int(g.out_dst[k])
            if selected[w]:
                continue
            t[w] += 1
            dd[w] = discounted_degree(degs[w], t[w], g.out_prob[k])
    return SeedSet(nodes, total, budget)


def baseline_ddh(g, budget):
    """Degree discount: a node adjacent to t seeds loses
    2t + (d - t) * t * p off its degree, p taken from the in-edge of the most
    recently added seed."""
    return _discount_select(
        g, budget,
        lambda d, t, p: d - (2.0 * t + (d - t) * t * p),
    )


def baseline_sdh(g, budget):
    """Single discount: degree minus one per already-selected in-neighbor."""
    return _discount_select(g, budget, lambda d, t, p: d - t)


def irie_ranks(g, alpha=IRIE_ALPHA, iterations=IRIE_ITERATIONS,
               history=False):
    """Influence ranks r = 1 + alpha * P r, iterated from r = 1.

    With `history`, returns the list of iterates (including the start)."""
    if not (0.0 < alpha < 1.0):
        raise InfmaxError("alpha must lie in (0, 1)")
    if iterations < 1:
        raise InfmaxError("iterations must be >= 1")
    mat = g.prob_matrix()
    r = np.ones(g.n, dtype=np.float64)
    iterates = [r.copy()]
    for _ in range(iterations):
        r = 1.0 + alpha * mat.dot(r)
        if history:
            iterates.append(r.copy())
    return iterates if history else r


def baseline_irie(g, budget, alpha=IRIE_ALPHA, iterations=IRIE_ITERATIONS):
    """Greedy selection on iterated influence ranks; after accepting a node,
    its out-neighbors' ranks are damped by (1 - edge probability) to
    discourage overlapping influence zones.

    This is a compact rank-iteration heuristic, not the full published
    IRIE machinery."""
    budget = _check_budget(budget)
    r = irie_ranks(g, alpha, iterations)
    selected = np.zeros(g.n, dtype=bool)
    nodes = []
    total = 0
    neg_inf = -np.inf
    while True:
        masked = np.where(selected | (g.cost > budget - total), neg_inf, r)
        u = int(np.argmax(masked))
        if masked[u] == neg_inf:
            break
        nodes.append(u)
        selected[u] = True
        total += int(g.cost[u])
        for k in range(g.out_ptr[u], g.out_ptr[u + 1]):
            w = int(g.out_dst[k])
            r[w] *= 1.0 - g.out_prob[k]
    return SeedSet(nodes, total, budget)
