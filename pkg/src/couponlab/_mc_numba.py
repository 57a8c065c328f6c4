"""Numba-jitted simulation kernels, one trial per loop iteration.

Same per-trial protocol and SplitMix64 substreams as _mc_numpy; the
integer aggregates match that backend bit for bit.  Compiled nogil so
the dispatcher can fan chunks out across threads.
"""

from __future__ import annotations

import numpy as np
from numba import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_S53 = np.uint64(53)


@njit(cache=True, nogil=True, inline="always")
def _mix64(z):
    z = z ^ (z >> _S30)
    z = z * _MIX1
    z = z ^ (z >> _S27)
    z = z * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True)
def race_counts(d, n_trials, first_trial, master_seed):
    seen1 = np.zeros(d, np.uint8)
    seen2 = np.zeros(d, np.uint8)
    du = np.uint64(d)
    n_sim = 0
    n_tta = 0
    n_nb = 0
    for t in range(n_trials):
        seen1[:] = 0
        seen2[:] = 0
        idx = np.uint64(first_trial + t + 1)
        state = _mix64(np.uint64(master_seed) ^ _mix64(idx * GOLDEN))
        c1 = 0
        c2 = 0
        everdiff = False
        stable = True
        sign0 = 0
        nb1 = True
        nb2 = True
        while True:
            state = state + GOLDEN
            k1 = np.int64(((_mix64(state) >> _S11) * du) >> _S53)
            state = state + GOLDEN
            k2 = np.int64(((_mix64(state) >> _S11) * du) >> _S53)
            if seen1[k1] == 0:
                seen1[k1] = 1
                c1 += 1
            if seen2[k2] == 0:
                seen2[k2] = 1
                c2 += 1
            diff = c1 - c2
            s = 0
            if diff > 0:
                s = 1
            elif diff < 0:
                s = -1
            if everdiff:
                if s != sign0:
                    stable = False
            elif s != 0:
                sign0 = s
                everdiff = True
            if diff < 0:
                nb1 = False
            if diff > 0:
                nb2 = False
            if c1 == d or c2 == d:
                sim = c1 == d and c2 == d
                if sim:
                    n_sim += 1
                else:
                    if everdiff and stable:
                        n_tta += 1
                    if (c1 == d and nb1) or (c2 == d and nb2):
                        n_nb += 1
                break
    return n_sim, n_tta, n_nb


@njit(cache=True, nogil=True)
def collector_stats(d, h, n_trials, first_trial, master_seed):
    counts = np.zeros(d, np.int32)
    du = np.uint64(d)
    sum_t = 0
    sum_t2 = 0
    sum_j = 0
    sum_j2 = 0
    for t in range(n_trials):
        counts[:] = 0
        idx = np.uint64(first_trial + t + 1)
        state = _mix64(np.uint64(master_seed) ^ _mix64(idx * GOLDEN))
        ncomp = 0
        step = 0
        while ncomp < d:
            step += 1
            state = state + GOLDEN
            k = np.int64(((_mix64(state) >> _S11) * du) >> _S53)
            counts[k] += 1
            if counts[k] == h:
                ncomp += 1
        singles = 0
        for i in range(d):
            if counts[i] == 1:
                singles += 1
        sum_t += step
        sum_t2 += step * step
        sum_j += singles
        sum_j2 += singles * singles
    return sum_t, sum_t2, sum_j, sum_j2
