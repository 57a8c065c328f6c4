"""Shared brute-force oracles.

Every closed form in the package is pinned against one of these
independent computations: set-partition enumeration, lattice-path
enumeration, full coupon-sequence enumeration, or an exact Markov
sweep of the race.  The oracles favor clarity over speed and never
import the formulas they check.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import combinations, product


def restricted_partition_table(n: int, h_max: int = 3) -> list[dict[int, int]]:
    """table[h][k] = partitions of an n-set into k blocks, all of size >= h.

    Walks every set partition once (element i joins an existing block
    or opens a new one) and bins it by block count and minimum block
    size.  Exponential; fine through n = 12.
    """
    table: list[dict[int, int]] = [defaultdict(int) for _ in range(h_max + 1)]
    if n == 0:
        for h in range(1, h_max + 1):
            table[h][0] = 1
        return table
    sizes = [0] * n

    def rec(i: int, nblocks: int) -> None:
        if i == n:
            smallest = min(sizes[:nblocks])
            for h in range(1, min(smallest, h_max) + 1):
                table[h][nblocks] += 1
            return
        for b in range(nblocks):
            sizes[b] += 1
            rec(i + 1, nblocks)
            sizes[b] -= 1
        sizes[nblocks] = 1
        rec(i + 1, nblocks + 1)
        sizes[nblocks] = 0

    rec(0, 0)
    return table


def iter_height_paths(a1: int, b1: int, a2: int, b2: int):
    """Yield the height sequence (b at x = a1..a2) of every H/NE path."""
    steps = a2 - a1
    rises = b2 - b1
    if steps < 0 or rises < 0 or rises > steps:
        return
    for rise_at in combinations(range(steps), rises):
        heights = [b1]
        y = b1
        rise_set = set(rise_at)
        for i in range(steps):
            if i in rise_set:
                y += 1
            heights.append(y)
        yield tuple(heights)


def height_path_weight(heights: tuple[int, ...], d: int) -> Fraction:
    """Collector probability of one height sequence."""
    w = Fraction(1)
    for y, y_next in zip(heights, heights[1:]):
        if y_next == y:
            w *= Fraction(y, d)
        else:
            w *= Fraction(d - y, d)
    return w


def enum_sigma(a1: int, b1: int, a2: int, b2: int, d: int) -> Fraction:
    """Total path weight between two points, by enumeration."""
    return sum(
        (height_path_weight(p, d) for p in iter_height_paths(a1, b1, a2, b2)),
        Fraction(0),
    )


def enum_disjoint_pairs(d, d1, d2, k, n) -> Fraction:
    """Weight of vertex-disjoint path pairs with the race's shifted endpoints.

    alpha runs (k+1, d1+1) -> (n-1, d-1), beta runs (k+1, d1) -> (n, d2);
    disjoint means no shared (x, height) vertex where both are defined.
    """
    total = Fraction(0)
    alphas = [
        (p, height_path_weight(p, d)) for p in iter_height_paths(k + 1, d1 + 1, n - 1, d - 1)
    ]
    betas = [(p, height_path_weight(p, d)) for p in iter_height_paths(k + 1, d1, n, d2)]
    for pa, wa in alphas:
        for pb, wb in betas:
            if all(ya != yb for ya, yb in zip(pa, pb)):
                total += wa * wb
    return total


def enum_tail(i1, j1, i2, j2, d) -> Fraction:
    """Sum of squared path weights (both collectors walk the same heights)."""
    return sum(
        (height_path_weight(p, d) ** 2 for p in iter_height_paths(i1, j1, i2, j2)),
        Fraction(0),
    )


def enum_frame(i1, j1, i2, j2, d) -> Fraction:
    """Weight of ordered pairs sharing exactly their endpoints.

    beta strictly below alpha at every interior x; both run
    (i1,j1) -> (i2,j2).
    """
    total = Fraction(0)
    paths = [(p, height_path_weight(p, d)) for p in iter_height_paths(i1, j1, i2, j2)]
    for pa, wa in paths:
        for pb, wb in paths:
            if all(pb[x] < pa[x] for x in range(1, len(pa) - 1)):
                total += wa * wb
    return total


def enum_init_seg(d: int, d1: int, k: int) -> Fraction:
    """Both collectors tied on the same height profile 0 -> (k, d1)."""
    return enum_tail(0, 0, k, d1, d)


def race_event_masses(d: int, horizon: int):
    """Exact Markov sweep of the two-collector race up to a draw horizon.

    Tracks (c1, c2, phase, nb1, nb2) where phase is 0 until the counts
    first differ, then +1/-1 while that strict order persists, then 2
    once broken.  Returns ({event: finished mass}, unfinished mass);
    the true event probability lies within unfinished of the mass.
    """
    states = {(0, 0, 0, True, True): Fraction(1)}
    masses = {
        "simultaneous": Fraction(0),
        "tie-then-ahead": Fraction(0),
        "never-behind": Fraction(0),
    }
    for _ in range(horizon):
        nxt: dict[tuple, Fraction] = defaultdict(Fraction)
        for (c1, c2, ph, nb1, nb2), p in states.items():
            for g1 in (0, 1):
                p1 = Fraction(d - c1, d) if g1 else Fraction(c1, d)
                if p1 == 0:
                    continue
                for g2 in (0, 1):
                    p2 = Fraction(d - c2, d) if g2 else Fraction(c2, d)
                    if p2 == 0:
                        continue
                    q = p * p1 * p2
                    n1, n2 = c1 + g1, c2 + g2
                    diff = n1 - n2
                    s = (diff > 0) - (diff < 0)
                    if ph == 0:
                        nph = s
                    elif ph in (1, -1):
                        nph = ph if s == ph else 2
                    else:
                        nph = 2
                    nnb1 = nb1 and diff >= 0
                    nnb2 = nb2 and diff <= 0
                    if n1 == d or n2 == d:
                        if n1 == d and n2 == d:
                            masses["simultaneous"] += q
                        else:
                            if nph in (1, -1):
                                masses["tie-then-ahead"] += q
                            if (n1 == d and nnb1) or (n2 == d and nnb2):
                                masses["never-behind"] += q
                    else:
                        nxt[(n1, n2, nph, nnb1, nnb2)] += q
        states = nxt
    return masses, sum(states.values(), Fraction(0))


def collector_run(seq, d: int, h: int):
    """(finish draw, singleton count) of one coupon sequence, or None."""
    counts = [0] * d
    ncomp = 0
    for i, c in enumerate(seq, start=1):
        counts[c] += 1
        if counts[c] == h:
            ncomp += 1
        if ncomp == d:
            return i, sum(1 for v in counts if v == 1)
    return None


def enum_completion_pmf(d: int, h: int, n: int) -> Fraction:
    """P(T = n) by walking all d^n coupon sequences."""
    hits = 0
    for seq in product(range(d), repeat=n):
        run = collector_run(seq, d, h)
        if run is not None and run[0] == n:
            hits += 1
    return Fraction(hits, d**n)


def enum_joint_singletons(d: int, n: int) -> dict[int, Fraction]:
    """{j: P(T = n, J = j)} by walking all d^n coupon sequences (h = 1)."""
    hits: dict[int, int] = defaultdict(int)
    for seq in product(range(d), repeat=n):
        run = collector_run(seq, d, 1)
        if run is not None and run[0] == n:
            hits[run[1]] += 1
    return {j: Fraction(c, d**n) for j, c in hits.items()}


def psi_series(d: int, r: int, s: int, t: int, target: Fraction):
    """Truncated double sum sum_{k>=1} sum_{n>=max(d,k+2)} r^2k s^(n-k-2) t^(n-k-1) / d^2n.

    Returns (partial, bound) with the true value inside [partial,
    partial + bound].  The inner sum over k is carried incrementally:
    u_n = sum_{k=1}^{n-2} r^2k (st)^(n-2-k) obeys u_{n+1} = st u_n + r^2(n-1),
    and the n-th inner total is t u_n once n >= d.  Every term is
    bounded by t max(r^2, st)^(n-2), giving an exact geometric-times-
    linear tail that is checked every 64 draws.
    """
    d2 = d * d
    r2 = r * r
    st = s * t
    big = max(r2, st)
    q = Fraction(big, d2)
    assert q < 1
    n0 = max(d, 3)
    # u at n = 3 is r^2; advance it to n0 first
    u = r2
    rpow = r2 * r2  # r^(2(n-1)) for the next advance
    for _ in range(3, n0):
        u = st * u + rpow
        rpow *= r2
    acc = 0  # partial * d^(2n) as an integer, folded once per draw
    n = n0
    while True:
        acc = acc * d2 + t * u
        if n % 64 == 0 or n - n0 > 500000:
            partial = Fraction(acc, d2**n)
            m0 = n - 1  # terms with n' > n have n'-2 >= n-1
            series = q**m0 * (Fraction(m0, 1 - q) + q / (1 - q) ** 2)
            bound = Fraction(t, d**4) * series
            if bound <= target:
                return partial, bound
            if n - n0 > 500000:  # pragma: no cover - guards a runaway sweep
                raise AssertionError("psi series did not certify")
        u = st * u + rpow
        rpow *= r2
        n += 1
