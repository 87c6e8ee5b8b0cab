"""Budget-feasible seed selection.

Four estimator-backed selectors share one contract: repeatedly add the
affordable node with the best cost-scaled gain until nothing affordable is
left.

* greedy_naive       - gains by direct simulation, recomputed per candidate
                       per round (reference algorithm; impractical at scale).
* greedy_approx      - single-node spreads estimated once, then a closed-form
                       approximate gain per candidate per round.
* lazy_greedy        - same gains served lazily off a max-heap, exploiting
                       the diminishing-returns property: stale values are
                       upper bounds, so only popped maxima are recomputed.
                       gain_mode "simulation" recomputes by simulation,
                       "approx" by the closed-form gain.
* celf_pp            - lazy approximate greedy plus a one-step look-ahead
                       (mg2 / prev_best bookkeeping) that can skip the
                       recomputation entirely.

greedy_approx, lazy_greedy(approx) and celf_pp return identical ordered seed
sets for the same inputs and master seed; ties always break toward the lower
node id.
"""

import heapq
import math
import time
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from numba import njit

from .diffusion import estimate_spread  # module-level so tests can stub it
from .errors import GraphFormatError, InfmaxError

NAIVE_SIZE_WARNING = 1000


@dataclass
class SeedSet:
    """Ordered selected nodes with cost accounting."""

    nodes: list
    total_cost: int
    budget: int

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise InfmaxError("duplicate seed node")
        if self.total_cost > self.budget:
            raise InfmaxError("seed set exceeds its budget")


@dataclass
class SelectionReport:
    seed_set: SeedSet
    spread_evaluations: int
    wall_time: float
    gain_evaluations: int = 0  # closed-form gain passes (0 for simulation-only)


class GainEntry(NamedTuple):
    """Per-node lazy-evaluation bookkeeping (celf_pp)."""

    node: int
    mg1: float
    mg2: float
    prev_best: Optional[int]
    flag: int


def write_seed_set(g, seed_set, path):
    """One line per seed: "rank node_label cost cumulative_cost"."""
    with open(path, "w", encoding="utf-8") as fh:
        cum = 0
        for rank, u in enumerate(seed_set.nodes, 1):
            c = int(g.cost[u])
            cum += c
            fh.write(f"{rank} {g.labels[u]} {c} {cum}\n")


def read_seed_set(g, path):
    """Node ids of a seed-set file written by write_seed_set."""
    nodes = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 4:
                raise GraphFormatError(
                    f"{path}: line {lineno}: expected 'rank label cost cum'"
                )
            nodes.append(g.id_of(tokens[1]))
    return nodes


# ---------------------------------------------------------------------------
# selection keys

_KEY_SCALE = 1073741824.0  # 2**30


@njit(cache=True)
def quantize_key(x):
    """Round a selection key to 30 mantissa bits.

    Gains that are equal in exact arithmetic can differ by accumulated
    rounding noise when computed along different float paths (fresh versus
    cached, original versus hypothetically-updated probabilities).  The
    lazy selectors rely on cached values never undercutting fresh ones, so
    all cost-scaled keys pass through this quantizer: noise collapses into
    exact ties, which every selector breaks the same way (lower node id).
    Genuine gain differences are far above the ~1e-9 relative quantum."""
    if x == 0.0:
        return 0.0
    m, e = math.frexp(x)
    return math.ldexp(np.rint(m * _KEY_SCALE) / _KEY_SCALE, e)


# ---------------------------------------------------------------------------
# closed-form approximate marginal gain

@njit(cache=True)
def _eq3_gain(out_ptr, out_dst, out_prob, sigma, reach, v):
    num = 0.0
    den = 0.0
    for k in range(out_ptr[v], out_ptr[v + 1]):
        w = out_dst[k]
        pw = out_prob[k] * sigma[w]
        den += pw
        num += pw * (1.0 - reach[w])
    if den <= 0.0:
        return sigma[v]
    return sigma[v] * (num / den)


@njit(cache=True)
def _eq3_gain_hyp(out_ptr, out_dst, out_prob, sigma, reach, extra_prob, v):
    """Gain of v as if the node whose out-probabilities fill `extra_prob`
    had already been accepted (extra_prob is 0 outside its out-neighborhood).
    Mirrors _eq3_gain bit for bit on untouched neighbors."""
    num = 0.0
    den = 0.0
    for k in range(out_ptr[v], out_ptr[v + 1]):
        w = out_dst[k]
        pw = out_prob[k] * sigma[w]
        den += pw
        pb = extra_prob[w]
        if pb > 0.0:
            rw = 1.0 - (1.0 - reach[w]) * (1.0 - pb)
            num += pw * (1.0 - rw)
        else:
            num += pw * (1.0 - reach[w])
    if den <= 0.0:
        return sigma[v]
    return sigma[v] * (num / den)


@njit(cache=True)
def _eq3_key(out_ptr, out_dst, out_prob, sigma, reach, cost, v):
    return quantize_key(
        _eq3_gain(out_ptr, out_dst, out_prob, sigma, reach, v) / cost[v])


@njit(cache=True)
def _eq3_argmax(out_ptr, out_dst, out_prob, sigma, reach, cost, excluded,
                budget_left):
    """Best affordable candidate by cost-scaled gain, lower id on ties.
    Returns (node or -1, key, candidates evaluated)."""
    n = out_ptr.shape[0] - 1
    best = -1
    best_key = -1.0
    count = 0
    for v in range(n):
        if excluded[v] == 1 or cost[v] > budget_left:
            continue
        count += 1
        key = _eq3_key(out_ptr, out_dst, out_prob, sigma, reach, cost, v)
        if key > best_key:
            best = v
            best_key = key
    return best, best_key, count


def approx_marginal_gain(g, sigma_single, seed_reach_prob, v):
    """Approximate marginal spread gain of adding v to the seed set.

    sigma_single[u] holds the estimated single-node spread of every node;
    seed_reach_prob[u] the combined next-step activation probability of u
    from the current seed set.  Falls back to sigma_single[v] when v has no
    out-edges (empty fraction reads as 1)."""
    return float(_eq3_gain(
        g.out_ptr, g.out_dst, g.out_prob,
        np.asarray(sigma_single, dtype=np.float64),
        np.asarray(seed_reach_prob, dtype=np.float64), int(v),
    ))


def apply_seed_to_reach_probs(g, reach, s):
    """Fold seed s's direct edges into the per-node combined activation
    probabilities (in place)."""
    for k in range(g.out_ptr[s], g.out_ptr[s + 1]):
        w = g.out_dst[k]
        reach[w] = 1.0 - (1.0 - reach[w]) * (1.0 - g.out_prob[k])


def single_node_spread_table(g, params, only=None):
    """sigma_T({u}) per node, one estimator call each.

    With an `only` mask, nodes outside it are skipped (left at 0) and not
    counted; the approximate-gain algorithms need every node's value because
    any out-neighbor's spread enters the gain formula, but simulation-based
    selection only needs candidates'.  Returns (table, estimator calls)."""
    sigma = np.zeros(g.n, dtype=np.float64)
    calls = 0
    for u in range(g.n):
        if only is not None and not only[u]:
            continue
        sigma[u] = estimate_spread(g, (u,), params).mean
        calls += 1
    return sigma, calls


def _check_budget(budget):
    if budget < 0:
        raise InfmaxError("budget must be >= 0")
    return int(budget)


def _nothing_affordable(g, budget):
    return g.n == 0 or int(g.cost.min()) > budget


def _pick_best_single(sigma, cost, budget):
    best = -1
    best_key = -1.0
    for v in range(len(sigma)):
        if cost[v] > budget:
            continue
        key = float(quantize_key(sigma[v] / cost[v]))
        if key > best_key:
            best = v
            best_key = key
    return best


# ---------------------------------------------------------------------------
# selectors

def greedy_naive(g, budget, params):
    """Reference greedy: per round, estimate the spread gain of every
    affordable candidate by simulation and add the best per unit cost.

    Infeasibly slow beyond roughly a thousand nodes; a warning is issued.
    """
    budget = _check_budget(budget)
    if g.n > NAIVE_SIZE_WARNING:
        warnings.warn(
            f"greedy_naive on {g.n} nodes: expect a very long runtime; "
            "consider greedy_approx or lazy_greedy instead",
            RuntimeWarning, stacklevel=2,
        )
    t0 = time.perf_counter()
    seeds = []
    in_seed = np.zeros(g.n, dtype=bool)
    total = 0
    evals = 0
    sigma_s = 0.0
    while True:
        left = budget - total
        cands = [v for v in range(g.n) if not in_seed[v] and g.cost[v] <= left]
        if not cands:
            break
        if seeds:
            sigma_s = estimate_spread(g, seeds, params).mean
            evals += 1
        best = -1
        best_key = -np.inf
        for v in cands:
            est = estimate_spread(g, seeds + [v], params)
            evals += 1
            key = float(quantize_key((est.mean - sigma_s) / int(g.cost[v])))
            if key > best_key:
                best = v
                best_key = key
        seeds.append(best)
        in_seed[best] = True
        total += int(g.cost[best])
    return SelectionReport(
        seed_set=SeedSet(seeds, total, budget),
        spread_evaluations=evals,
        wall_time=time.perf_counter() - t0,
    )


def greedy_approx(g, budget, params):
    """Two-phase greedy on approximate gains.

    Phase 1 estimates every node's single spread once and seeds with the best
    spread per unit cost.  Phase 2 repeatedly adds the affordable candidate
    maximizing the closed-form gain per unit cost, updating the seed-set
    activation probabilities after every addition.
    """
    budget = _check_budget(budget)
    t0 = time.perf_counter()
    if _nothing_affordable(g, budget):
        return SelectionReport(SeedSet([], 0, budget), 0,
                               time.perf_counter() - t0)
    sigma, evals = single_node_spread_table(g, params)
    cost = g.cost
    first = _pick_best_single(sigma, cost, budget)
    seeds = [first]
    total = int(cost[first])
    excluded = np.zeros(g.n, dtype=np.uint8)
    excluded[first] = 1
    reach = np.zeros(g.n, dtype=np.float64)
    apply_seed_to_reach_probs(g, reach, first)
    passes = 0
    while True:
        v, _, count = _eq3_argmax(
            g.out_ptr, g.out_dst, g.out_prob, sigma, reach, cost, excluded,
            np.int64(budget - total),
        )
        passes += count
        if v < 0:
            break
        seeds.append(int(v))
        excluded[v] = 1
        total += int(cost[v])
        apply_seed_to_reach_probs(g, reach, int(v))
    return SelectionReport(
        seed_set=SeedSet(seeds, total, budget),
        spread_evaluations=evals,
        wall_time=time.perf_counter() - t0,
        gain_evaluations=passes,
    )


def lazy_greedy(g, budget, params, gain_mode="approx"):
    """Lazy (heap-driven) variant of the greedy selectors.

    Heap keys are cost-scaled gains; a popped node is accepted only when its
    value was recomputed against the current seed set, otherwise it is
    recomputed and pushed back.  gain_mode "approx" recomputes with the
    closed-form gain, "simulation" with two spread estimates (the current
    seed set's estimate is carried over between rounds).
    """
    if gain_mode not in ("approx", "simulation"):
        raise InfmaxError(f"unknown gain_mode {gain_mode!r}")
    budget = _check_budget(budget)
    t0 = time.perf_counter()
    if _nothing_affordable(g, budget):
        return SelectionReport(SeedSet([], 0, budget), 0,
                               time.perf_counter() - t0)
    cost = g.cost
    if gain_mode == "simulation":
        # an initially unaffordable node can never be selected (the budget
        # only shrinks), and simulation gains never read other nodes' sigma
        sigma, evals = single_node_spread_table(g, params,
                                                only=cost <= budget)
    else:
        sigma, evals = single_node_spread_table(g, params)
    first = _pick_best_single(sigma, cost, budget)
    seeds = [first]
    total = int(cost[first])
    excluded = np.zeros(g.n, dtype=np.uint8)
    excluded[first] = 1
    reach = np.zeros(g.n, dtype=np.float64)
    apply_seed_to_reach_probs(g, reach, first)

    sigma_s = float(sigma[first])  # current sigma_T(S), simulation mode only
    sigma_with = np.zeros(g.n, dtype=np.float64)
    key_of = np.empty(g.n, dtype=np.float64)
    flag = np.zeros(g.n, dtype=np.int64)  # seed count the key was computed at
    heap = []
    for v in range(g.n):
        if excluded[v] or cost[v] > budget:
            continue
        key_of[v] = float(quantize_key(sigma[v] / cost[v]))
        heap.append((-key_of[v], v))
    heapq.heapify(heap)

    passes = 0
    while heap:
        neg_key, v = heapq.heappop(heap)
        if excluded[v] or -neg_key != key_of[v]:
            continue  # superseded entry
        if cost[v] > budget - total:
            excluded[v] = 1  # budget only shrinks: gone for good
            continue
        if flag[v] == len(seeds):
            seeds.append(int(v))
            excluded[v] = 1
            total += int(cost[v])
            apply_seed_to_reach_probs(g, reach, int(v))
            if gain_mode == "simulation":
                sigma_s = float(sigma_with[v])
            continue
        if gain_mode == "approx":
            key = float(_eq3_key(g.out_ptr, g.out_dst, g.out_prob, sigma,
                                 reach, cost, int(v)))
            passes += 1
        else:
            est = estimate_spread(g, seeds + [int(v)], params)
            evals += 1
            sigma_with[v] = est.mean
            key = float(quantize_key((est.mean - sigma_s) / int(cost[v])))
        flag[v] = len(seeds)
        key_of[v] = key
        heapq.heappush(heap, (-key, v))
    return SelectionReport(
        seed_set=SeedSet(seeds, total, budget),
        spread_evaluations=evals,
        wall_time=time.perf_counter() - t0,
        gain_evaluations=passes,
    )


def celf_pp(g, budget, params, _trace=None):
    """lazy_greedy("approx") plus a look-ahead: each recomputation also
    evaluates the gain with the current front-runner hypothetically accepted
    (mg2, prev_best).  When the front-runner really was the last seed added,
    the stored mg2 is exactly the fresh gain and the recomputation is
    skipped.  Output is identical to lazy_greedy(approx); the number of gain
    passes never exceeds it."""
    budget = _check_budget(budget)
    t0 = time.perf_counter()
    if _nothing_affordable(g, budget):
        return SelectionReport(SeedSet([], 0, budget), 0,
                               time.perf_counter() - t0)
    sigma, evals = single_node_spread_table(g, params)
    cost = g.cost
    first = _pick_best_single(sigma, cost, budget)
    seeds = [first]
    last_seed = first
    total = int(cost[first])
    excluded = np.zeros(g.n, dtype=np.uint8)
    excluded[first] = 1
    reach = np.zeros(g.n, dtype=np.float64)
    apply_seed_to_reach_probs(g, reach, first)

    # stale upper bounds (gains against the empty set), quantized like every
    # other key
    mg1 = np.array([float(quantize_key(sigma[v] / cost[v]))
                    for v in range(g.n)])
    mg2 = np.zeros(g.n, dtype=np.float64)
    prev_best = np.full(g.n, -1, dtype=np.int64)
    flag = np.zeros(g.n, dtype=np.int64)
    key_of = mg1.copy()
    extra_prob = np.zeros(g.n, dtype=np.float64)
    heap = [(-key_of[v], v) for v in range(g.n) if not excluded[v]]
    heapq.heapify(heap)

    passes = 0
    neg_inf = -np.inf
    while heap:
        neg_key, v = heapq.heappop(heap)
        if excluded[v] or -neg_key != key_of[v]:
            continue
        if cost[v] > budget - total:
            excluded[v] = 1
            continue
        if flag[v] == len(seeds):
            seeds.append(int(v))
            excluded[v] = 1
            last_seed = int(v)
            total += int(cost[v])
            apply_seed_to_reach_probs(g, reach, int(v))
            continue
        if prev_best[v] == last_seed and flag[v] == len(seeds) - 1:
            # look-ahead hit: mg2 was computed against exactly the current
            # seed set, so adopt it without a gain pass
            mg1[v] = mg2[v]
            prev_best[v] = -1
        else:
            mg1[v] = float(_eq3_key(g.out_ptr, g.out_dst, g.out_prob, sigma,
                                    reach, cost, int(v)))
            passes += 1
            masked = np.where((excluded == 1) | (cost > budget - total),
                              neg_inf, mg1)
            cur_best = int(np.argmax(masked))
            if masked[cur_best] == neg_inf or cur_best == v:
                prev_best[v] = -1
            else:
                for k in range(g.out_ptr[cur_best], g.out_ptr[cur_best + 1]):
                    extra_prob[g.out_dst[k]] = g.out_prob[k]
                mg2[v] = float(quantize_key(_eq3_gain_hyp(
                    g.out_ptr, g.out_dst, g.out_prob, sigma, reach,
                    extra_prob, int(v),
                ) / int(cost[v])))
                prev_best[v] = cur_best
                for k in range(g.out_ptr[cur_best], g.out_ptr[cur_best + 1]):
                    extra_prob[g.out_dst[k]] = 0.0
        flag[v] = len(seeds)
        key_of[v] = mg1[v]
        heapq.heappush(heap, (-mg1[v], v))
    if _trace is not None:
        _trace["mg1"] = mg1
        _trace["mg2"] = mg2
        _trace["prev_best"] = prev_best
        _trace["flag"] = flag
        _trace["entries"] = [
            GainEntry(v, float(mg1[v]), float(mg2[v]),
                      None if prev_best[v] < 0 else int(prev_best[v]),
                      int(flag[v]))
            for v in range(g.n)
        ]
    return SelectionReport(
        seed_set=SeedSet(seeds, total, budget),
        spread_evaluations=evals,
        wall_time=time.perf_counter() - t0,
        gain_evaluations=passes,
    )
