"""Monte-Carlo verification of the exact results.

Every probability and expectation the exact modules compute can be
estimated by simulation, and the whole layer is deterministic: a
SplitMix64 generator is split per trial, with trial i's stream seeded
by mix64(master_seed XOR mix64((i+1) * GOLDEN)).  Aggregates are
therefore a pure function of (master_seed, trials), independent of
chunk size, thread count, and backend.

Two kernel backends produce identical integer aggregates: a numba
njit one (default when numba imports) and a pure-numpy one.  Select
with COUPONLAB_BACKEND=numba|numpy; cap worker threads with
COUPONLAB_THREADS.  Single trials can also be replayed in pure Python
(simulate_race / simulate_collector) for inspection and for pinning
the kernels in tests.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import import_module

import numpy as np

DEFAULT_SEED = 42

# SplitMix64 constants (Steele, Lea, Flood 2014): the Weyl increment is
# the odd integer nearest 2^64/phi, the two multipliers are the
# MurmurHash3-style finalizer constants.
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1

# ((x >> 11) * d) >> 53 maps 53 random bits to 0..d-1; keeping the
# product inside 64 bits requires d <= 2048, and the selection bias is
# below d / 2^53.
MAX_D = 2048


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """The scalar generator: a Weyl sequence put through mix64."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def coupon(self, d: int) -> int:
        """Draw a coupon type in 0..d-1."""
        return ((self.next_uint64() >> 11) * d) >> 53


def trial_seed(master_seed: int, index: int) -> int:
    """Seed of trial `index`'s private stream (the splitting function)."""
    return mix64((master_seed ^ mix64(((index + 1) * GOLDEN) & MASK64)) & MASK64)


def trial_stream(master_seed: int, index: int) -> SplitMix64:
    return SplitMix64(trial_seed(master_seed, index))


@dataclass(frozen=True)
class SimConfig:
    """One simulation request.

    streams is a parallelism hint (worker thread cap; 0 = automatic).
    It never changes results, only how the trial range is fanned out.
    """

    d: int
    trials: int
    h: int = 1
    master_seed: int = DEFAULT_SEED
    streams: int = 0

    def __post_init__(self):
        if not 1 <= self.d <= MAX_D:
            raise ValueError(f"need 1 <= d <= {MAX_D}")
        if self.trials < 1:
            raise ValueError("need trials >= 1")
        if self.h < 1:
            raise ValueError("need h >= 1")
        if self.streams < 0:
            raise ValueError("streams must be >= 0")


@dataclass(frozen=True)
class EstimateResult:
    """A point estimate with its standard error and provenance."""

    estimate: float
    std_error: float
    trials: int
    seed: int


@dataclass(frozen=True)
class RaceTrajectory:
    """One full race: cumulative distinct counts after each draw.

    winner is 1 or 2, or 0 for a simultaneous finish.
    """

    steps: tuple[tuple[int, int], ...]
    finish_step: int
    winner: int


EVENTS = ("simultaneous", "tie-then-ahead", "never-behind")


def simulate_race(d: int, rng: SplitMix64) -> RaceTrajectory:
    """Race two collectors on one stream: player 1 draws, then player 2."""
    if not 1 <= d <= MAX_D:
        raise ValueError(f"need 1 <= d <= {MAX_D}")
    seen1 = [False] * d
    seen2 = [False] * d
    c1 = c2 = 0
    steps: list[tuple[int, int]] = []
    while True:
        k1 = rng.coupon(d)
        k2 = rng.coupon(d)
        if not seen1[k1]:
            seen1[k1] = True
            c1 += 1
        if not seen2[k2]:
            seen2[k2] = True
            c2 += 1
        steps.append((c1, c2))
        if c1 == d or c2 == d:
            if c1 == d and c2 == d:
                winner = 0
            else:
                winner = 1 if c1 == d else 2
            return RaceTrajectory(steps=tuple(steps), finish_step=len(steps), winner=winner)


def simulate_collector(d: int, h: int, rng: SplitMix64) -> tuple[int, int]:
    """One collector to h copies of all d types: (T, singleton count at T)."""
    if not 1 <= d <= MAX_D:
        raise ValueError(f"need 1 <= d <= {MAX_D}")
    if h < 1:
        raise ValueError("need h >= 1")
    counts = [0] * d
    ncomp = 0
    step = 0
    while ncomp < d:
        step += 1
        k = rng.coupon(d)
        counts[k] += 1
        if counts[k] == h:
            ncomp += 1
    return step, sum(1 for c in counts if c == 1)


def classify_race(traj: RaceTrajectory) -> dict[str, bool]:
    """Event flags of one trajectory, as the kernels compute them.

    Raw classification: no special-casing of d = 1 (see estimate_event
    for the degenerate-race convention).  never-behind requires a
    strict winner, so a simultaneous finish never qualifies.
    """
    c1f, c2f = traj.steps[-1]
    everdiff = False
    stable = True
    sign0 = 0
    nb1 = nb2 = True
    for c1, c2 in traj.steps:
        diff = c1 - c2
        s = (diff > 0) - (diff < 0)
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
    sim = traj.winner == 0
    return {
        "simultaneous": sim,
        "tie-then-ahead": everdiff and stable and not sim,
        "never-behind": not sim and ((traj.winner == 1 and nb1) or (traj.winner == 2 and nb2)),
    }


def backend_name() -> str:
    """Resolve the kernel backend: COUPONLAB_BACKEND, else numba if it imports."""
    name = os.environ.get("COUPONLAB_BACKEND", "").strip().lower()
    if name:
        if name not in ("numba", "numpy"):
            raise ValueError(f"COUPONLAB_BACKEND must be numba or numpy, got {name!r}")
        return name
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


def _load_backend():
    return import_module(f"couponlab._mc_{backend_name()}")


def _thread_count(config: SimConfig) -> int:
    if config.streams > 0:
        return config.streams
    env = os.environ.get("COUPONLAB_THREADS", "").strip()
    if env:
        n = int(env)
        if n < 1:
            raise ValueError("COUPONLAB_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def _chunks(trials: int, d: int) -> list[tuple[int, int]]:
    # keep the numpy backend's (chunk x d) work arrays modest
    size = max(1024, min(1 << 16, (1 << 23) // max(d, 1)))
    return [(first, min(size, trials - first)) for first in range(0, trials, size)]


def _run_summed(kernel: str, config: SimConfig, extra: tuple = ()) -> tuple[int, ...]:
    """Run a kernel over the whole trial range; sum the integer aggregates."""
    backend = _load_backend()
    fn = getattr(backend, kernel)
    seed_arg = np.uint64(config.master_seed & MASK64)
    parts = _chunks(config.trials, config.d)
    jobs = [(config.d, *extra, count, first, seed_arg) for first, count in parts]
    workers = min(_thread_count(config), len(jobs))
    if workers > 1 and backend.__name__.endswith("numba"):
        # nogil kernels scale across threads; compile before forking out
        fn(config.d, *extra, 1, 0, seed_arg)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda j: fn(*j), jobs))
    else:
        results = [fn(*j) for j in jobs]
    return tuple(int(sum(col)) for col in zip(*results))


def estimate_event(event: str, config: SimConfig) -> EstimateResult:
    """Estimate one race event probability.

    Convention for the degenerate d = 1 race: both collectors finish on
    draw 1, and all three events hold with probability 1 (matching the
    exact formulas' d = 1 values).
    """
    if event not in EVENTS:
        raise ValueError(f"unknown event {event!r}; expected one of {EVENTS}")
    if config.h != 1:
        raise ValueError("race events are defined for h = 1")
    if config.d == 1:
        return EstimateResult(1.0, 0.0, config.trials, config.master_seed)
    sim, tta, nb = _run_summed("race_counts", config)
    count = {"simultaneous": sim, "tie-then-ahead": tta, "never-behind": nb}[event]
    p = count / config.trials
    se = math.sqrt(p * (1.0 - p) / config.trials)
    return EstimateResult(p, se, config.trials, config.master_seed)


def _mean_result(total: int, total_sq: int, config: SimConfig) -> EstimateResult:
    n = config.trials
    mean = total / n
    if n > 1:
        var = (total_sq - n * mean * mean) / (n - 1)
        se = math.sqrt(max(var, 0.0) / n)
    else:
        se = 0.0
    return EstimateResult(mean, se, n, config.master_seed)


def estimate_mean_T(config: SimConfig) -> EstimateResult:
    """Estimate E[T] for the h-copy collector."""
    sum_t, sum_t2, _, _ = _run_summed("collector_stats", config, extra=(config.h,))
    return _mean_result(sum_t, sum_t2, config)


def estimate_mean_singletons(config: SimConfig) -> EstimateResult:
    """Estimate E[J], the mean singleton count at completion (h = 1 only)."""
    if config.h != 1:
        raise ValueError("singletons at completion are identically 0 for h >= 2")
    _, _, sum_j, sum_j2 = _run_summed("collector_stats", config, extra=(config.h,))
    return _mean_result(sum_j, sum_j2, config)
