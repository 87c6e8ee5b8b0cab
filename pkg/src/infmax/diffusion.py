"""Delay-aware cascade simulation with a hard deadline.

Seeds activate at t=0.  When a node u activates at time t, it makes one
randomized attempt per out-edge (u, v): the attempt succeeds with the edge
probability, a delay offset p >= 1 is drawn from the edge's delay
distribution, and the tentative activation time is t + p.  A node activates
at the minimum tentative time over all successful attempts, provided that
time is within the deadline.  With a nonzero threshold on v, an attempt
additionally requires prob * phi_p >= threshold(v).

Spread sigma_T(S) is estimated by Monte-Carlo averaging over R independent
trials; trial i draws from the counter-based stream (master_seed, i), so the
estimate is bitwise identical for a fixed master seed no matter how many
threads run the trials.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from .errors import InfmaxError
from .rng import next_unit, normalize_seed, stream_init

_PENDING_INF = np.int64(1) << np.int64(62)


@dataclass(frozen=True)
class SimulationParams:
    deadline_T: int
    trials_R: int
    master_seed: int

    def __post_init__(self):
        if self.deadline_T < 0:
            raise InfmaxError("deadline_T must be >= 0")
        if self.trials_R < 1:
            raise InfmaxError("trials_R must be >= 1")


@dataclass(frozen=True)
class SpreadEstimate:
    mean: float
    trials: int
    sample_stddev: float

    @property
    def stderr(self):
        return self.sample_stddev / np.sqrt(self.trials)


@njit(cache=True)
def _laic_trial(out_ptr, out_dst, out_prob, delay_cdf, delay_pmf, delay_len,
                threshold, seeds, deadline, horizon, state):
    """One cascade realization; returns (influenced count, influenced mask).

    Nodes are finalized in nondecreasing activation time using a bucket queue
    over t = 0..horizon (every reachable activation time fits there).
    """
    n = out_ptr.shape[0] - 1
    m = out_dst.shape[0]
    nbuckets = horizon + 1
    pending = np.full(n, _PENDING_INF, dtype=np.int64)
    finalized = np.zeros(n, dtype=np.uint8)
    bucket_head = np.full(nbuckets, -1, dtype=np.int64)
    cap = m + seeds.shape[0] + 1
    pool_node = np.empty(cap, dtype=np.int64)
    pool_next = np.empty(cap, dtype=np.int64)
    top = 0
    for s in seeds:
        if pending[s] != 0:
            pending[s] = 0
            pool_node[top] = s
            pool_next[top] = bucket_head[0]
            bucket_head[0] = top
            top += 1

    count = 0
    for t in range(nbuckets):
        entry = bucket_head[t]
        while entry != -1:
            v = pool_node[entry]
            entry = pool_next[entry]
            if finalized[v] == 1 or pending[v] != t:
                continue
            finalized[v] = 1
            count += 1
            for k in range(out_ptr[v], out_ptr[v + 1]):
                w = out_dst[k]
                if finalized[w] == 1:
                    continue
                state, r = next_unit(state)
                if r >= out_prob[k]:
                    continue
                state, r2 = next_unit(state)
                last = delay_len[k]
                off = last
                for j in range(last):
                    if r2 < delay_cdf[k, j]:
                        off = j + 1
                        break
                if threshold[w] > 0.0 and \
                        out_prob[k] * delay_pmf[k, off - 1] < threshold[w]:
                    continue
                tt = t + off
                if tt <= deadline and tt < nbuckets and tt < pending[w]:
                    pending[w] = tt
                    pool_node[top] = w
                    pool_next[top] = bucket_head[tt]
                    bucket_head[tt] = top
                    top += 1
    return count, finalized


@njit(cache=True, parallel=True)
def _estimate_kernel(out_ptr, out_dst, out_prob, delay_cdf, delay_pmf,
                     delay_len, threshold, seeds, deadline, horizon, trials,
                     master):
    total = np.int64(0)
    total_sq = np.int64(0)
    for i in prange(trials):
        state = stream_init(master, np.uint64(i))
        c, _ = _laic_trial(out_ptr, out_dst, out_prob, delay_cdf, delay_pmf,
                           delay_len, threshold, seeds, deadline, horizon,
                           state)
        total += c
        total_sq += c * c
    return total, total_sq


def _check_seeds(g, seeds):
    arr = np.unique(np.asarray(sorted(int(s) for s in seeds), dtype=np.int64))
    if arr.size == 0:
        raise InfmaxError("seed set must be non-empty")
    if arr[0] < 0 or arr[-1] >= g.n:
        raise InfmaxError(f"seed id out of range [0, {g.n})")
    return arr


def _horizon(g, deadline_T):
    lmax = int(g.delay_pmf.shape[1]) if g.m else 1
    return int(min(int(deadline_T), max(g.n - 1, 0) * lmax))


def trial_stream(master_seed, index):
    """State of trial `index`'s random stream under `master_seed`."""
    return int(stream_init(normalize_seed(master_seed), np.uint64(index)))


def simulate_trial(g, seeds, deadline_T, stream):
    """Run one cascade; returns the set of nodes influenced within the
    deadline (seeds included).  `stream` is a uint64 stream state, usually
    from trial_stream()."""
    if deadline_T < 0:
        raise InfmaxError("deadline_T must be >= 0")
    arr = _check_seeds(g, seeds)
    _, fin = _laic_trial(
        g.out_ptr, g.out_dst, g.out_prob, g.delay_cdf, g.delay_pmf,
        g.delay_len, g.threshold, arr, np.int64(deadline_T),
        np.int64(_horizon(g, deadline_T)), normalize_seed(stream),
    )
    return {int(i) for i in np.nonzero(fin)[0]}


def estimate_spread(g, seeds, params):
    """Monte-Carlo estimate of sigma_T(seeds) over params.trials_R trials.

    Deterministic for a fixed params.master_seed regardless of trial
    execution order or thread count (per-trial counter-based streams,
    integer accumulation).
    """
    arr = _check_seeds(g, seeds)
    total, total_sq = _estimate_kernel(
        g.out_ptr, g.out_dst, g.out_prob, g.delay_cdf, g.delay_pmf,
        g.delay_len, g.threshold, arr, np.int64(params.deadline_T),
        np.int64(_horizon(g, params.deadline_T)), np.int64(params.trials_R),
        normalize_seed(params.master_seed),
    )
    r = params.trials_R
    total, total_sq = int(total), int(total_sq)
    mean = total / r
    if r > 1:
        var = (total_sq - total * total / r) / (r - 1)
        stddev = float(np.sqrt(max(var, 0.0)))
    else:
        stddev = 0.0
    return SpreadEstimate(mean=mean, trials=r, sample_stddev=stddev)


def dump_trials(g, seeds, params, path):
    """Debug helper: write one line "trial_id: id,id,..." per trial."""
    arr = _check_seeds(g, seeds)
    deadline = np.int64(params.deadline_T)
    horizon = np.int64(_horizon(g, params.deadline_T))
    master = normalize_seed(params.master_seed)
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(params.trials_R):
            _, fin = _laic_trial(
                g.out_ptr, g.out_dst, g.out_prob, g.delay_cdf, g.delay_pmf,
                g.delay_len, g.threshold, arr, deadline, horizon,
                stream_init(master, np.uint64(i)),
            )
            ids = ",".join(str(int(v)) for v in np.nonzero(fin)[0])
            fh.write(f"{i}: {ids}\n")


def combined_activation_prob(g, seeds, u):
    """Probability that at least one seed's direct attempt reaches u in the
    next step: 1 - prod over seed in-neighbors v of (1 - P(v -> u)); 0 when
    u has no in-edge from the seed set."""
    seed_set = {int(s) for s in seeds}
    u = int(u)
    if u in seed_set:
        raise InfmaxError("node is already a seed")
    acc = 1.0
    hit = False
    for k in range(g.in_ptr[u], g.in_ptr[u + 1]):
        if int(g.in_src[k]) in seed_set:
            acc *= 1.0 - g.out_prob[g.in_eid[k]]
            hit = True
    return 1.0 - acc if hit else 0.0
