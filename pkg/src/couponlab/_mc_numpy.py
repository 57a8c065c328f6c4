"""Pure-numpy simulation kernels.

The portable backend: vectorized implementations of the per-trial draw
protocol.  Every trial runs its own SplitMix64 substream keyed by the
global trial index, so these kernels and the numba ones return
identical integer aggregates for the same (master_seed, trial range),
no matter how the caller chunks or threads the work.

Draw protocol per race trial: player 1 draws, then player 2, every
step, both included on the finishing step.  A trial stops consuming
its stream the moment it finishes.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer, elementwise on uint64 arrays."""
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= _MIX1
    z ^= z >> np.uint64(27)
    z *= _MIX2
    z ^= z >> np.uint64(31)
    return z


def trial_states(master_seed: int, first_trial: int, count: int) -> np.ndarray:
    """Initial stream states for global trials first_trial .. +count-1."""
    idx = np.arange(first_trial + 1, first_trial + count + 1, dtype=np.uint64)
    return mix64(np.uint64(master_seed) ^ mix64(idx * GOLDEN))


def _draw(state: np.ndarray, rows: np.ndarray, d: int) -> np.ndarray:
    """Advance the selected streams one output; return coupon indices."""
    state[rows] += GOLDEN
    x = mix64(state[rows])
    return (((x >> np.uint64(11)) * np.uint64(d)) >> np.uint64(53)).astype(np.int64)


def race_counts(
    d: int, n_trials: int, first_trial: int, master_seed: int
) -> tuple[int, int, int]:
    """Race n_trials pairs of collectors; count the three events.

    Returns (simultaneous, tie_then_ahead, never_behind) counts, raw:
    simultaneous excluded from the other two, no d = 1 special-casing.
    """
    state = trial_states(master_seed, first_trial, n_trials)
    seen1 = np.zeros((n_trials, d), np.bool_)
    seen2 = np.zeros((n_trials, d), np.bool_)
    c1 = np.zeros(n_trials, np.int64)
    c2 = np.zeros(n_trials, np.int64)
    everdiff = np.zeros(n_trials, np.bool_)
    stable = np.ones(n_trials, np.bool_)
    sign0 = np.zeros(n_trials, np.int8)
    nb1 = np.ones(n_trials, np.bool_)
    nb2 = np.ones(n_trials, np.bool_)
    n_sim = n_tta = n_nb = 0
    alive = np.arange(n_trials)
    while alive.size:
        k1 = _draw(state, alive, d)
        k2 = _draw(state, alive, d)
        fresh1 = ~seen1[alive, k1]
        seen1[alive, k1] = True
        c1[alive] += fresh1
        fresh2 = ~seen2[alive, k2]
        seen2[alive, k2] = True
        c2[alive] += fresh2

        diff = c1[alive] - c2[alive]
        s = np.sign(diff).astype(np.int8)
        prev = everdiff[alive]
        stable[alive] &= np.where(prev, s == sign0[alive], True)
        sign0[alive] = np.where(~prev & (s != 0), s, sign0[alive])
        everdiff[alive] |= s != 0
        nb1[alive] &= diff >= 0
        nb2[alive] &= diff <= 0

        fin = (c1[alive] == d) | (c2[alive] == d)
        if fin.any():
            rows = alive[fin]
            sim = (c1[rows] == d) & (c2[rows] == d)
            tta = everdiff[rows] & stable[rows] & ~sim
            nb = ~sim & (((c1[rows] == d) & nb1[rows]) | ((c2[rows] == d) & nb2[rows]))
            n_sim += int(sim.sum())
            n_tta += int(tta.sum())
            n_nb += int(nb.sum())
            alive = alive[~fin]
    return n_sim, n_tta, n_nb


def collector_stats(
    d: int, h: int, n_trials: int, first_trial: int, master_seed: int
) -> tuple[int, int, int, int]:
    """Run n_trials single collectors to h copies of all d types.

    Returns (sum_T, sum_T_sq, sum_singletons, sum_singletons_sq) where
    the singleton count is the number of types held exactly once when
    the collection completes.
    """
    state = trial_states(master_seed, first_trial, n_trials)
    counts = np.zeros((n_trials, d), np.int32)
    ncomp = np.zeros(n_trials, np.int64)
    sum_t = sum_t2 = sum_j = sum_j2 = 0
    step = 0
    alive = np.arange(n_trials)
    while alive.size:
        step += 1
        k = _draw(state, alive, d)
        c = counts[alive, k] + 1
        counts[alive, k] = c
        ncomp[alive] += c == h
        fin = ncomp[alive] == d
        if fin.any():
            rows = alive[fin]
            singles = (counts[rows] == 1).sum(axis=1)
            m = rows.size
            sum_t += step * m
            sum_t2 += step * step * m
            sum_j += int(singles.sum())
            sum_j2 += int((singles * singles).sum())
            alive = alive[~fin]
    return sum_t, sum_t2, sum_j, sum_j2
