"""Exact partition-count kernels.

Everything downstream rests on counts of set partitions: the Stirling
numbers of the second kind {n brace k} and their size-restricted
generalization T_h(n, k), the number of partitions of an n-set into k
blocks each of size >= h (h=1 recovers the ordinary numbers).  This
module keeps grow-on-demand integer tables of both, plus the two
partial-fraction coefficient families that turn the tables' generating
functions into the closed forms used by the race and collection
modules.

All values are exact: Python ints for counts, fractions.Fraction for
rationals.  Nothing here is floating point.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb, factorial

# Exact rational type used across the package.  An alias rather than a
# wrapper: Fraction already has the arithmetic, hashing and comparison
# we need, and keeping the stdlib type means callers can mix in ints
# freely.
ExactRational = Fraction


class StirlingCache:
    """Dense per-h tables of T_h(n, k), extended on demand.

    Row n of the h-table holds T_h(n, k) for k = 0..n//h (every larger
    k is zero because each block needs at least h elements).  Rows are
    appended under a lock, so concurrent readers are safe; reads of
    existing rows never lock.  The recurrence, obtained by cases on the
    block containing element n (either it joins one of the k existing
    blocks, or it is the largest element of a fresh block filled out by
    h-1 of the remaining n-1 elements):

        T_h(n, k) = k * T_h(n-1, k) + C(n-1, h-1) * T_h(n-h, k-1)
    """

    def __init__(self):
        self._tables: dict[int, list[list[int]]] = {}
        self._lock = threading.Lock()

    def _grow(self, h: int, n: int) -> None:
        with self._lock:
            rows = self._tables.setdefault(h, [[1]])
            while len(rows) <= n:
                m = len(rows)
                kmax = m // h
                row = [0] * (kmax + 1)
                prev = rows[m - 1]
                below = rows[m - h] if m >= h else None
                c = comb(m - 1, h - 1)
                for k in range(1, kmax + 1):
                    v = k * prev[k] if k < len(prev) else 0
                    if below is not None and k - 1 < len(below):
                        v += c * below[k - 1]
                    row[k] = v
                rows.append(row)

    def entry(self, n: int, k: int, h: int = 1) -> int:
        """T_h(n, k); zero outside the support (k<0, k>n//h, n<0)."""
        if h < 1:
            raise ValueError("block size floor h must be >= 1")
        if n < 0 or k < 0 or k * h > n:
            return 0
        rows = self._tables.get(h)
        if rows is None or len(rows) <= n:
            self._grow(h, n)
            rows = self._tables[h]
        row = rows[n]
        return row[k] if k < len(row) else 0

    def ensure(self, n_max: int, h: int = 1) -> None:
        """Populate rows 0..n_max eagerly (useful before fanning out threads)."""
        if h < 1:
            raise ValueError("block size floor h must be >= 1")
        if n_max >= 0:
            self._grow(h, n_max)


_CACHE = StirlingCache()


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind {n brace k}.

    Out-of-range arguments follow the usual convention and give 0
    (k > n, k < 0, n < 0, or k = 0 with n > 0).
    """
    return _CACHE.entry(n, k, 1)


def stirling2_explicit(n: int, k: int) -> int:
    """{n brace k} by the inclusion-exclusion sum, independent of the table.

        {n brace k} = (1/k!) * sum_{r=0}^{k} (-1)^{k-r} C(k, r) r^n

    Kept public so the two computation routes can be checked against
    each other; prefer stirling2 for speed.
    """
    if n < 0 or k < 0 or k > n:
        return 0
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0:
        return 0
    total = sum((-1) ** (k - r) * comb(k, r) * r**n for r in range(k + 1))
    q, rem = divmod(total, factorial(k))
    assert rem == 0
    return q


def assoc_stirling(n: int, k: int, h: int) -> int:
    """Partitions of an n-set into k blocks, every block of size >= h."""
    if h < 1:
        raise ValueError("block size floor h must be >= 1")
    return _CACHE.entry(n, k, h)


def coeff_A(k: int, r: int) -> Fraction:
    """Partial-fraction coefficient A_{k,r} = (-1)^(k-r) r^k C(k,r) / k!.

    These expand the Stirling column generating function:
        sum_n {n brace k} x^n = x^k / prod_{m=1..k} (1 - m x)
                              = x^k * sum_{r=1..k} A_{k,r} / (1 - r x)
    so that {n brace k} = sum_r A_{k,r} r^(n-k).
    """
    if not 1 <= r <= k:
        raise ValueError("need 1 <= r <= k")
    return Fraction((-1) ** (k - r) * r**k * comb(k, r), factorial(k))


def partial_fraction_B(a: int, b: int, m: int) -> Fraction:
    """Coefficient B_m in 1 / prod_{j=a..b} (1 - j x) = sum_m B_m / (1 - m x).

        B_m = (-1)^(b-m) m^(b-a) C(b-a, m-a) / (b-a)!

    Valid for a <= m <= b; the degenerate a == b product gives B_a = 1.
    """
    if b < a:
        raise ValueError("need a <= b")
    if not a <= m <= b:
        raise ValueError("need a <= m <= b")
    return Fraction((-1) ** (b - m) * m ** (b - a) * comb(b - a, m - a), factorial(b - a))


def stirling2_gf(k: int, x: Fraction) -> Fraction:
    """Column generating function sum_{n>=k} {n brace k} x^n, evaluated exactly.

    Equals x^k / ((1-x)(1-2x)...(1-kx)); poles at x = 1/m are rejected.
    """
    if k < 0:
        raise ValueError("need k >= 0")
    x = Fraction(x)
    denom = Fraction(1)
    for m in range(1, k + 1):
        f = 1 - m * x
        if f == 0:
            raise ValueError(f"pole at x = 1/{m}")
        denom *= f
    return x**k / denom

def stirling2_sq_gf(k: int, x: Fraction) -> Fraction:
    """Generating function of the squares, sum_{n>=k} {n brace k}^2 x^n.

    Squaring the partial-fraction expansion of the column gf and
    resumming geometric series gives

        x^k * sum_{r,s=1..k} A_{k,r} A_{k,s} / (1 - r s x)

    which is what the simultaneous-finish probability integrates over.
    Poles at x = 1/(r s) are rejected.
    """
    if k < 0:
        raise ValueError("need k >= 0")
    x = Fraction(x)
    if k == 0:
        return Fraction(1)
    coeffs = [coeff_A(k, r) for r in range(1, k + 1)]
    total = Fraction(0)
    for r in range(1, k + 1):
        for s in range(1, k + 1):
            f = 1 - r * s * x
            if f == 0:
                raise ValueError(f"pole at x = 1/{r * s}")
            total += coeffs[r - 1] * coeffs[s - 1] / f
    return x**k * total
