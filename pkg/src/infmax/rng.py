"""Counter-based random streams for reproducible parallel Monte-Carlo.

Every simulation trial draws from its own splitmix64 stream whose state is a
pure function of (master_seed, trial_index).  Trials therefore produce the
same numbers no matter which worker runs them or in which order, which is
what makes spread estimates bitwise-reproducible across thread counts.
"""

import numpy as np
from numba import njit

_MASK64 = (1 << 64) - 1

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / float(1 << 53)


def normalize_seed(seed):
    """Map an arbitrary Python integer onto the uint64 seed space."""
    return np.uint64(int(seed) & _MASK64)


@njit(cache=True)
def mix64(z):
    # splitmix64 finalizer (Steele, Lea & Flood)
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def stream_init(master_seed, index):
    """State of the independent stream for trial `index` under `master_seed`."""
    return mix64(master_seed + (np.uint64(index) + np.uint64(1)) * GOLDEN)


@njit(cache=True)
def next_u64(state):
    state = state + GOLDEN
    return state, mix64(state)


@njit(cache=True)
def next_unit(state):
    """Advance the stream; return (state, uniform double in [0, 1))."""
    state, z = next_u64(state)
    return state, (z >> np.uint64(11)) * _INV53


def py_mix64(z):
    """Pure-Python mirror of mix64, for cross-checking the jitted stream."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def py_stream(master_seed, index, count):
    """First `count` uniform doubles of trial `index`'s stream, in Python."""
    golden = 0x9E3779B97F4A7C15
    state = py_mix64((int(master_seed) + (index + 1) * golden) & _MASK64)
    out = []
    for _ in range(count):
        state = (state + golden) & _MASK64
        out.append((py_mix64(state) >> 11) * _INV53)
    return out
