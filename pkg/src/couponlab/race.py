"""Two collectors racing on the draw lattice, in exact arithmetic.

Picture a collector's progress as a lattice path: the x-axis counts
draws, the y-axis counts distinct coupons held.  Each draw either
repeats a coupon already held (a horizontal step, probability j/d from
height j) or reveals a new one (a northeast step, probability
(d-j)/d).  Two independent collectors are two such paths, and the race
questions become weighted path-counting problems:

* the probability both finish on the same draw (simultaneous finish),
* the probability the race ties for a while and then one collector
  pulls ahead for good (tie then always ahead),
* building blocks for both: weighted counts of single paths, of pairs
  of identical paths, and of nonintersecting pairs, the last via the
  reflection-style 2x2 determinant of endpoint-shifted path counts.

Everything returns fractions.Fraction.  The closed forms were obtained
by partial-fraction expansion of the path generating functions; each
one is pinned against brute-force path enumeration in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .stirling import coeff_A

HORIZONTAL = "H"
NORTHEAST = "NE"


@dataclass(frozen=True)
class LatticePath:
    """A path of H/NE steps starting at a lattice point.

    start is (x, y) with y the number of distinct coupons held; steps
    is a tuple of HORIZONTAL / NORTHEAST tokens.
    """

    start: tuple[int, int]
    steps: tuple[str, ...]

    def __post_init__(self):
        if self.start[1] < 0:
            raise ValueError("start height must be >= 0")
        for s in self.steps:
            if s not in (HORIZONTAL, NORTHEAST):
                raise ValueError(f"unknown step token {s!r}")

    def vertices(self) -> list[tuple[int, int]]:
        """All lattice points visited, endpoints included."""
        x, y = self.start
        out = [(x, y)]
        for s in self.steps:
            x += 1
            if s == NORTHEAST:
                y += 1
            out.append((x, y))
        return out

    @property
    def end(self) -> tuple[int, int]:
        x, y = self.start
        ne = sum(1 for s in self.steps if s == NORTHEAST)
        return (x + len(self.steps), y + ne)


@dataclass(frozen=True)
class GvMatrix:
    """The 2x2 matrix of endpoint-shifted path weights.

    Entry (i, j) is the total weight of paths from shifted start A_i to
    shifted end B_j; its determinant is the total weight of
    nonintersecting path pairs with the original endpoints.
    """

    a11: Fraction
    a12: Fraction
    a21: Fraction
    a22: Fraction

    def det(self) -> Fraction:
        return self.a11 * self.a22 - self.a12 * self.a21


def path_prob(path: LatticePath, d: int) -> Fraction:
    """Probability that a d-coupon collector walks exactly this path.

    A horizontal step at height j weighs j/d (redraw one of the j held
    coupons); a northeast step from height j weighs (d-j)/d.  Heights
    above d are rejected.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    x, y = path.start
    if y > d:
        raise ValueError("start height exceeds d")
    w = Fraction(1)
    for s in path.steps:
        if s == HORIZONTAL:
            w *= Fraction(y, d)
        else:
            y += 1
            if y > d:
                raise ValueError("path climbs above d")
            w *= Fraction(d - y + 1, d)
    return w


def _sigma(a1: int, b1: int, a2: int, b2: int, d: int) -> Fraction:
    """Total weight of paths (a1,b1) -> (a2,b2); 0 if no path exists.

    Closed form from partial fractions of prod_j 1/(1 - jx):

        (1/d^N) * (d-b1)!/(d-b2)! *
            sum_{m=b1}^{b2} (-1)^(b2-m) m^N C(R, m-b1) / R!

    with N = a2-a1 draws and R = b2-b1 new coupons.
    """
    N = a2 - a1
    R = b2 - b1
    if N < 0 or R < 0 or R > N or b1 < 0 or b2 > d:
        return Fraction(0)
    if N == 0:
        return Fraction(1)
    acc = 0
    for m in range(b1, b2 + 1):
        acc += (-1) ** (b2 - m) * m**N * comb(R, m - b1)
    pre = Fraction(factorial(d - b1), factorial(d - b2) * factorial(R))
    return pre * Fraction(acc, d**N)


def sum_paths_prob(start: tuple[int, int], end: tuple[int, int], d: int) -> Fraction:
    """Probability a collector at `start` sits at `end` after the steps between.

    Sums path_prob over every H/NE path between the two points.  The
    endpoints must be well formed: end no earlier and no lower than
    start, climb at most one per draw, and stay within 0..d.
    """
    a1, b1 = start
    a2, b2 = end
    if d < 1:
        raise ValueError("need d >= 1")
    if a2 < a1 or b2 < b1 or (b2 - b1) > (a2 - a1) or b1 < 0 or b2 > d:
        raise ValueError(f"no admissible paths from {start} to {end} with d={d}")
    return _sigma(a1, b1, a2, b2, d)


def gv_entries(d: int, d1: int, d2: int, k: int, n: int) -> GvMatrix:
    """Shifted-endpoint path weights for pairs splitting at draw k.

    The pair of interest leaves a tie at height (k, d1): the leader
    steps to d1+1, the trailer stays at d1.  The leader must sit at
    height d-1 after draw n-1 (it finishes on draw n... the caller adds
    the finishing weight), the trailer at height d2 after draw n.  The
    four entries cross those starts and ends:

        A1 = (k+1, d1+1)   B1 = (n-1, d-1)
        A2 = (k+1, d1)     B2 = (n,   d2)

    Unreachable corners give weight 0 rather than an error; the
    determinant is still the nonintersecting-pair weight.
    """
    _validate_split(d, d1, d2, k, n)
    return GvMatrix(
        a11=_sigma(k + 1, d1 + 1, n - 1, d - 1, d),
        a12=_sigma(k + 1, d1 + 1, n, d2, d),
        a21=_sigma(k + 1, d1, n - 1, d - 1, d),
        a22=_sigma(k + 1, d1, n, d2, d),
    )


def _validate_split(d: int, d1: int, d2: int, k: int, n: int) -> None:
    if d < 2:
        raise ValueError("need d >= 2")
    if not 1 <= d1 <= d2 <= d - 1:
        raise ValueError("need 1 <= d1 <= d2 <= d-1")
    if k < 1 or n < k + 2:
        raise ValueError("need 1 <= k <= n-2")


def gv_det(d: int, d1: int, d2: int, k: int, n: int) -> Fraction:
    """Determinant of gv_entries in closed form.

    Expanding each entry by partial fractions and collecting the cross
    terms collapses the 2x2 determinant to a double sum:

        (d-d1)! / (d^(2n-2k-3) (d-d2)! (d2-d1)!) *
        sum_{l=d1}^{d-1} sum_{m=d1}^{d2} (-1)^(d-1+d2-l-m) (l-m)
            l^(n-k-2) m^(n-k-1) C(d-d1-1, l-d1) C(d2-d1, m-d1)

    Equal to gv_entries(...).det() and to the brute-force sum over
    nonintersecting path pairs; both equalities are pinned in tests.
    """
    _validate_split(d, d1, d2, k, n)
    acc = 0
    for l in range(d1, d):
        cl = comb(d - d1 - 1, l - d1)
        if cl == 0:
            continue
        pl = l ** (n - k - 2)
        for m in range(d1, d2 + 1):
            term = (l - m) * pl * m ** (n - k - 1) * comb(d2 - d1, m - d1)
            if (d - 1 + d2 - l - m) % 2:
                term = -term
            acc += cl * term
    pre = Fraction(
        factorial(d - d1),
        d ** (2 * n - 2 * k - 3) * factorial(d - d2) * factorial(d2 - d1),
    )
    return pre * acc


def ribbon_prob(d: int, d_outer: int, d_inner: int, k: int, n: int) -> Fraction:
    """Nonintersecting-pair weight with the split heights named by role.

    d_inner is the trailer's height at the split (the determinant's
    d1), d_outer the trailer's final height (its d2).  Pure argument
    reordering over gv_det.
    """
    return gv_det(d, d_inner, d_outer, k, n)


def init_seg(d: int, d1: int, k: int) -> Fraction:
    """Weight of the tied prefix: both collectors walk the same path.

    Sums path_prob squared over all paths (0,0) -> (k, d1):

        2 d!^2 / ((d-d1)!^2 d^(2k) (2 d1)!) *
            sum_{m=1}^{d1} (-1)^(d1-m) C(2 d1, d1+m) m^(2k)

    Zero for k < d1 (cannot collect d1 coupons in fewer draws).
    """
    if d < 1 or not 1 <= d1 <= d:
        raise ValueError("need 1 <= d1 <= d")
    if k < d1:
        return Fraction(0)
    acc = 0
    for m in range(1, d1 + 1):
        term = comb(2 * d1, d1 + m) * m ** (2 * k)
        acc += -term if (d1 - m) % 2 else term
    pre = Fraction(
        2 * factorial(d) ** 2,
        factorial(d - d1) ** 2 * d ** (2 * k) * factorial(2 * d1),
    )
    return pre * acc


def tail_prob(i1: int, j1: int, i2: int, j2: int, d: int) -> Fraction:
    """Weight of a tied stretch: both collectors walk one path (i1,j1)->(i2,j2).

    Sums path_prob squared over all paths between the two points.
    Partial fractions of prod_{j=j1..j2} 1/(1 - j^2 x) give

        ((d-j1)!/(d-j2)!)^2 / d^(2N) *
        sum_{m=j1}^{j2} (-1)^(j2-m) 2 m^(2N+1) (m+j1-1)! /
            ((m-j1)! (j2-m)! (m+j2)!)

    with N = i2-i1.  Geometry violations return 0; from height 0 the
    first step must be northeast (weight 1 squared), handled by
    shifting the start.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    N = i2 - i1
    R = j2 - j1
    if N < 0 or R < 0 or R > N or j1 < 0 or j2 > d:
        return Fraction(0)
    if N == 0:
        return Fraction(1)
    if j1 == 0:
        if R == 0:
            return Fraction(0)
        return tail_prob(i1 + 1, 1, i2, j2, d)
    acc = Fraction(0)
    for m in range(j1, j2 + 1):
        num = 2 * m ** (2 * N + 1) * factorial(m + j1 - 1)
        den = factorial(m - j1) * factorial(j2 - m) * factorial(m + j2)
        term = Fraction(num, den)
        acc += -term if (j2 - m) % 2 else term
    pre = Fraction(factorial(d - j1), factorial(d - j2)) ** 2
    return pre * acc / d ** (2 * N)


def frame_prob(i1: int, j1: int, i2: int, j2: int, d: int) -> Fraction:
    """Weight of path pairs sharing exactly their two endpoints.

    Sums P(alpha) P(beta) over pairs from (i1,j1) to (i2,j2) that are
    vertex-disjoint strictly between the endpoints, with beta below
    alpha.  The corner steps are forced (alpha leaves northeast while
    beta leaves flat; beta arrives northeast while alpha arrives flat),
    and the interior is a 2x2 determinant, which collapses to

        j1 j2 (d-j1)!^2 / (d^(2N) R!^2 (d-j2)!^2) *
        sum_{l,m=j1}^{j2} (-1)^(l+m) (l m)^(N-2) (l-m) (m-j2)
            C(R, m-j1) C(R, l-j1)

    with N = i2-i1, R = j2-j1.  Needs N >= 2, 1 <= j1 < j2 <= d and
    R <= N-1; anything else has no such pairs and returns 0.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    N = i2 - i1
    R = j2 - j1
    if N < 2 or R < 1 or R > N - 1 or j1 < 1 or j2 > d:
        return Fraction(0)
    acc = 0
    for l in range(j1, j2 + 1):
        cl = comb(R, l - j1)
        for m in range(j1, j2 + 1):
            term = (l - m) * (m - j2) * (l * m) ** (N - 2) * comb(R, m - j1) * cl
            if (l + m) % 2:
                term = -term
            acc += term
    pre = Fraction(
        j1 * j2 * factorial(d - j1) ** 2,
        d ** (2 * N) * factorial(R) ** 2 * factorial(d - j2) ** 2,
    )
    return pre * acc


def psi(d: int, r: int, s: int, t: int) -> Fraction:
    """The split-and-finish resummation kernel: a truncated geometric double sum.

        psi(d,r,s,t) = sum_{k>=1} sum_{n>=max(d, k+2)}
                           r^(2k) s^(n-k-2) t^(n-k-1) / d^(2n)

    k indexes the split draw, n the finish draw (never before draw d,
    hence the truncation that stops the sum from factoring).
    Convergence needs r < d and s t < d^2.  Summing the geometric
    pieces in closed form leaves a removable singularity at r^2 = s t,
    handled by its own branch.
    """
    if d < 2 or not 1 <= r <= d - 1:
        raise ValueError("need 1 <= r <= d-1")
    if s < 1 or t < 1 or s * t >= d * d:
        raise ValueError("need s, t >= 1 with s*t < d^2")
    d2 = d * d
    r2 = r * r
    st = s * t
    if r2 == st:
        num = r ** (2 * d) * (d**3 - 2 * d2 - r2 * d + 3 * r2)
        den = d ** (2 * d - 2) * (d2 - r2) ** 2 * s * s * t
        return Fraction(num, den)
    num = r**4 * st ** (d - 1) * (r2 - d2) + st * r ** (2 * d) * (d2 - st)
    den = d ** (2 * d - 2) * (d2 - st) * (d2 - r2) * (r2 - st) * r2 * s
    return Fraction(num, den)


def simultaneous_finish_prob(d: int) -> Fraction:
    """Probability two independent d-coupon collectors finish on the same draw.

    Summing the squared completion pmf through its partial-fraction
    coefficients A (see stirling.coeff_A) gives the finite form

        (d!^2 / d^(2d)) * sum_{r,s=1}^{d-1} A_{d-1,r} A_{d-1,s} / (1 - rs/d^2)

    d = 1 finishes on draw 1 with certainty for both.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    if d == 1:
        return Fraction(1)
    coeffs = [coeff_A(d - 1, r) for r in range(1, d)]
    acc = Fraction(0)
    for r in range(1, d):
        for s in range(1, d):
            acc += coeffs[r - 1] * coeffs[s - 1] / (1 - Fraction(r * s, d * d))
    return Fraction(factorial(d) ** 2, d ** (2 * d)) * acc


def _sigma1(d: int) -> Fraction:
    """Tie-then-ahead mass from splits strictly before the winner's last draw.

    For each split height d1, split draw k and finish draw n, the tied
    prefix contributes init_seg and the strictly-ordered remainder
    contributes the nonintersecting determinant.  Partial fractions
    collapse the (k, n) double sum into psi, leaving finite sums over
    the residue indices r (prefix), s (leader end), t (trailer end):

        sum_{d1=1}^{d-1} 2 d!^2 d1 (d-d1) / ((d-d1)!^2 (2 d1)!) *
        sum_{r=1}^{d1} sum_{s,t=d1}^{d-1} (-1)^(d1-r-s-t) (s-t)
            C(2 d1, d1+r) C(d-d1-1, s-d1) C(d-d1, d-t) psi(d,r,s,t)

    The s = t terms vanish; one orientation is counted here, the caller
    doubles for the two-winner symmetry.
    """
    total = Fraction(0)
    for d1 in range(1, d):
        inner = Fraction(0)
        for r in range(1, d1 + 1):
            cr = comb(2 * d1, d1 + r)
            for s in range(d1, d):
                cs = comb(d - d1 - 1, s - d1)
                if cs == 0:
                    continue
                for t in range(d1, d):
                    if t == s:
                        continue
                    term = (s - t) * cr * cs * comb(d - d1, d - t) * psi(d, r, s, t)
                    if (d1 - r - s - t) % 2:
                        term = -term
                    inner += term
        pre = Fraction(
            2 * factorial(d) ** 2 * d1 * (d - d1),
            factorial(d - d1) ** 2 * factorial(2 * d1),
        )
        total += pre * inner
    return total


def _sigma2(d: int) -> Fraction:
    """Tie-then-ahead mass from ties broken on the winner's final draw.

    The pair stays tied through height d-1 and the leader's last draw
    breaks it for good:

        2 (d-1) d!^2 / (d^(2d-2) (2d-2)!) *
        sum_{r=1}^{d-1} (-1)^(d-1-r) C(2d-2, d-1+r) r^(2d-2) / (d^2 - r^2)

    Again one orientation only; the caller doubles it.
    """
    acc = Fraction(0)
    for r in range(1, d):
        term = Fraction(comb(2 * d - 2, d - 1 + r) * r ** (2 * d - 2), d * d - r * r)
        acc += -term if (d - 1 - r) % 2 else term
    pre = Fraction(2 * (d - 1) * factorial(d) ** 2, d ** (2 * d - 2) * factorial(2 * d - 2))
    return pre * acc


def tie_then_ahead_prob(d: int) -> Fraction:
    """Probability the race ties for a while, then the winner stays strictly ahead.

    The event: at some draw the distinct counts diverge, and from that
    draw through the winner's finish the eventual winner is strictly
    ahead (a finishing tie does not count).  With d = 1 both finish on
    draw 1 and the degenerate race counts as an immediate win.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    if d == 1:
        return Fraction(1)
    return 2 * _sigma1(d) + 2 * _sigma2(d)
