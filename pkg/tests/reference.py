"""Independent reference computations used as test oracles.

Deliberately written with none of the package's machinery: plain-Python
enumeration, explicit BFS, factorial arithmetic.  Anything here that
disagrees with the library is a library bug.
"""

import math


def plain_ic_exact_spread(n, edges, seeds):
    """Exact expected spread of the classical independent cascade (no
    delays, no deadline) by enumerating all 2^m edge outcomes.

    edges: list of (src, dst, prob); seeds: iterable of node ids.
    """
    m = len(edges)
    seeds = list(seeds)
    total = 0.0
    for mask in range(1 << m):
        prob = 1.0
        adj = [[] for _ in range(n)]
        for i, (u, v, p) in enumerate(edges):
            if (mask >> i) & 1:
                prob *= p
                adj[u].append(v)
            else:
                prob *= 1.0 - p
        seen = set(seeds)
        stack = list(seeds)
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        total += prob * len(seen)
    return total


def edges_of(g):
    """(src, dst, prob) triples of a Graph, CSR order."""
    out = []
    for u in range(g.n):
        for k in range(g.out_ptr[u], g.out_ptr[u + 1]):
            out.append((u, int(g.out_dst[k]), float(g.out_prob[k])))
    return out


def factorial_truncated_poisson(lam, max_offset):
    """Truncated, renormalized Poisson pmf over offsets 1..max_offset,
    computed with explicit factorials."""
    weights = [lam ** k * math.exp(-lam) / math.factorial(k)
               for k in range(max_offset)]
    total = sum(weights)
    return [w / total for w in weights]


def best_feasible_subset(sigma_table, cost, budget):
    """Max exact spread over every budget-feasible subset, given the
    all-subsets spread table (index = bitmask)."""
    n = len(cost)
    best = 0.0
    best_mask = 0
    for mask in range(1 << n):
        c = sum(int(cost[v]) for v in range(n) if (mask >> v) & 1)
        if c <= budget and sigma_table[mask] > best:
            best = sigma_table[mask]
            best_mask = mask
    return best, best_mask


def eq3_by_hand(sigma_v, terms):
    """One-off evaluation of the approximate-gain formula.

    terms: list of (edge_prob, seed_reach_prob_of_target, sigma_target).
    """
    num = sum(p * (1.0 - r) * s for p, r, s in terms)
    den = sum(p * s for p, r, s in terms)
    if den == 0:
        return sigma_v
    return sigma_v * num / den
