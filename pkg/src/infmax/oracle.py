"""Exact spread computation for tiny instances by exhaustive enumeration.

Every joint realization of (edge success, delay offset) is enumerated with
its probability; each realization is a deterministic earliest-arrival
problem.  This is the independent reference the Monte-Carlo estimator is
tested against, so it deliberately shares no machinery with the simulator:
no random numbers, Bellman-style relaxation instead of a time-bucket queue.
"""

import numpy as np
from numba import njit

from .errors import EnumerationCapError, InfmaxError

DEFAULT_BRANCH_CAP = 10_000_000
_DIST_INF = 1e18


def _edge_endpoints(g):
    src = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.out_ptr))
    return src, g.out_dst.astype(np.int64)


def _branch_tables(g):
    """Per-edge outcome branches: branch 0 is failure; branch j >= 1 succeeds
    with delay offset j.  A nonzero destination threshold turns offsets with
    prob * phi_j below it into failures (the attempt cannot land)."""
    src, dst = _edge_endpoints(g)
    lmax = int(g.delay_pmf.shape[1]) if g.m else 1
    bcount = np.empty(g.m, dtype=np.int64)
    bprob = np.zeros((g.m, lmax + 1), dtype=np.float64)
    bdelay = np.full((g.m, lmax + 1), -1, dtype=np.int64)
    for e in range(g.m):
        p = g.out_prob[e]
        l = int(g.delay_len[e])
        bcount[e] = l + 1
        bprob[e, 0] = 1.0 - p
        thr = g.threshold[dst[e]]
        for j in range(1, l + 1):
            mass = p * g.delay_pmf[e, j - 1]
            bprob[e, j] = mass
            if thr > 0.0 and mass < thr:
                continue  # branch keeps its probability but acts as failure
            bdelay[e, j] = j
    return src, dst, bcount, bprob, bdelay


def _branch_total(bcount, cap):
    total = 1
    for c in bcount:
        total *= int(c)
        if total > cap:
            raise EnumerationCapError(
                f"enumeration needs > {cap} branches; instance too large"
            )
    return total


@njit(cache=True)
def _enumerate_expected_count(esrc, edst, bprob, bdelay, bcount, n, seed_mask,
                              deadline):
    m = esrc.shape[0]
    digits = np.zeros(m, dtype=np.int64)
    dist = np.empty(n, dtype=np.float64)
    total = 0.0
    while True:
        p = 1.0
        for e in range(m):
            p *= bprob[e, digits[e]]
        if p > 0.0:
            for v in range(n):
                dist[v] = 0.0 if seed_mask[v] == 1 else _DIST_INF
            changed = True
            while changed:
                changed = False
                for e in range(m):
                    d = bdelay[e, digits[e]]
                    if d < 0:
                        continue
                    nd = dist[esrc[e]] + d
                    if nd < dist[edst[e]]:
                        dist[edst[e]] = nd
                        changed = True
            cnt = 0
            for v in range(n):
                if dist[v] <= deadline:
                    cnt += 1
            total += p * cnt
        k = 0
        while k < m:
            digits[k] += 1
            if digits[k] < bcount[k]:
                break
            digits[k] = 0
            k += 1
        if k == m:
            break
    return total


@njit(cache=True)
def _enumerate_reach_weights(esrc, edst, bprob, bdelay, bcount, n, deadline):
    """For every node v, the probability weight of each source mask
    {s : s reaches v within the deadline} across all realizations."""
    m = esrc.shape[0]
    digits = np.zeros(m, dtype=np.int64)
    weights = np.zeros((n, 1 << n), dtype=np.float64)
    dist = np.empty(n, dtype=np.float64)
    reach_mask = np.empty(n, dtype=np.int64)
    while True:
        p = 1.0
        for e in range(m):
            p *= bprob[e, digits[e]]
        if p > 0.0:
            for v in range(n):
                reach_mask[v] = 0
            for s in range(n):
                for v in range(n):
                    dist[v] = _DIST_INF
                dist[s] = 0.0
                changed = True
                while changed:
                    changed = False
                    for e in range(m):
                        d = bdelay[e, digits[e]]
                        if d < 0:
                            continue
                        nd = dist[esrc[e]] + d
                        if nd < dist[edst[e]]:
                            dist[edst[e]] = nd
                            changed = True
                for v in range(n):
                    if dist[v] <= deadline:
                        reach_mask[v] |= np.int64(1) << np.int64(s)
            for v in range(n):
                weights[v, reach_mask[v]] += p
        k = 0
        while k < m:
            digits[k] += 1
            if digits[k] < bcount[k]:
                break
            digits[k] = 0
            k += 1
        if k == m:
            break
    return weights


def exact_spread(g, seeds, deadline_T, branch_cap=DEFAULT_BRANCH_CAP):
    """Exact E[influenced count within deadline_T] for the given seed set."""
    if deadline_T < 0:
        raise InfmaxError("deadline_T must be >= 0")
    if g.m > 25:
        raise EnumerationCapError("exact enumeration is limited to m <= 25")
    seeds = {int(s) for s in seeds}
    if not seeds:
        raise InfmaxError("seed set must be non-empty")
    if any(s < 0 or s >= g.n for s in seeds):
        raise InfmaxError(f"seed id out of range [0, {g.n})")
    src, dst, bcount, bprob, bdelay = _branch_tables(g)
    _branch_total(bcount, branch_cap)
    seed_mask = np.zeros(g.n, dtype=np.uint8)
    for s in seeds:
        seed_mask[s] = 1
    return float(_enumerate_expected_count(
        src, dst, bprob, bdelay, bcount, g.n, seed_mask, float(deadline_T)
    ))


def exact_spread_all_subsets(g, deadline_T, branch_cap=DEFAULT_BRANCH_CAP):
    """Exact spread of every seed set at once: entry `mask` of the returned
    array is the spread of the seed set whose members are the set bits.
    Entry 0 (the empty set) is 0."""
    if deadline_T < 0:
        raise InfmaxError("deadline_T must be >= 0")
    if g.n > 16:
        raise EnumerationCapError("all-subsets table is limited to n <= 16")
    if g.m > 25:
        raise EnumerationCapError("exact enumeration is limited to m <= 25")
    src, dst, bcount, bprob, bdelay = _branch_tables(g)
    _branch_total(bcount, branch_cap)
    weights = _enumerate_reach_weights(
        src, dst, bprob, bdelay, bcount, g.n, float(deadline_T)
    )
    n = g.n
    full = (1 << n) - 1
    # subset-sum per node: sos[v][mask] = P(reach-set of v is a subset of mask)
    sos = weights.copy()
    for b in range(n):
        bit = 1 << b
        for mask in range(1 << n):
            if mask & bit:
                sos[:, mask] += sos[:, mask ^ bit]
    sigma = np.zeros(1 << n, dtype=np.float64)
    for mask in range(1, 1 << n):
        comp = full ^ mask
        sigma[mask] = float(np.sum(1.0 - sos[:, comp]))
    return sigma
