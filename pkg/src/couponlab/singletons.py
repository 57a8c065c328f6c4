"""How many coupons are unique at the moment the collection completes.

Run a single d-coupon collector to completion (one copy of each) and
count the types held exactly once at the stopping draw.  The joint law
of (completion draw, singleton count) factors through the
size->=2-partition counts: every non-singleton type contributes a block
of at least two draws.  The singleton count J always includes the
finishing coupon, so J >= 1; its mean is the harmonic number H_d.

Exact values are fractions.Fraction; the quadrature route returns
floats and exists to cross-check the exact one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .quadrature import QuadratureSpec, integral_I
from .stirling import assoc_stirling


@dataclass(frozen=True)
class SingletonMarginal:
    """P(J = j) for j = 1..d, tagged with how it was computed."""

    d: int
    probs: dict[int, Fraction | float]
    method: str

    def mean(self):
        return sum(j * p for j, p in self.probs.items())

    def total(self):
        return sum(self.probs.values())


def joint_singleton_pmf(n: int, j: int, d: int) -> Fraction:
    """P(T = n and J = j) for a one-copy collector.

        d!/d^n * C(n-1, j-1) * T_2(n-j, d-j)

    The finishing draw is a singleton; choose which of the other n-1
    draws are the remaining j-1 singletons, then split the rest into
    d-j blocks of size >= 2.  Zero outside the support (which needs
    1 <= j <= d and n >= 2d - j).
    """
    if d < 1:
        raise ValueError("need d >= 1")
    if not 1 <= j <= d or n < d:
        return Fraction(0)
    return Fraction(
        factorial(d) * comb(n - 1, j - 1) * assoc_stirling(n - j, d - j, 2), d**n
    )


def _marginal_term(d: int, j: int) -> Fraction:
    """P(J = j) by summing the joint law over n in closed form.

    The n-sum telescopes into a trinomial expansion:

        j C(d,j) * sum_{a+b+c=d-j} (d-j)!/(a! b! c!) (-1)^(b+c)
                       (j-1+c)! / (d-a)^(j+c)
    """
    K = d - j
    acc = Fraction(0)
    for a in range(K + 1):
        for b in range(K - a + 1):
            c = K - a - b
            coef = factorial(K) // (factorial(a) * factorial(b) * factorial(c))
            term = Fraction(coef * factorial(j - 1 + c), (d - a) ** (j + c))
            acc += -term if (b + c) % 2 else term
    return j * comb(d, j) * acc


def singleton_marginal(
    d: int, method: str = "exact", spec: QuadratureSpec | None = None
) -> SingletonMarginal:
    """The marginal law of the singleton count J.

    method "exact" (alias "exact-termwise") sums the joint pmf in
    closed form and verifies the result is a probability vector;
    method "quadrature" evaluates the integral representation

        P(J = j) = j C(d,j) * I(j-1, j, 2, d-j)

    and is the independent numeric cross-check.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    if method in ("exact", "exact-termwise"):
        probs: dict[int, Fraction | float] = {j: _marginal_term(d, j) for j in range(1, d + 1)}
        total = sum(probs.values())
        if total != 1:
            raise AssertionError(f"exact singleton marginal sums to {total}, not 1")
        return SingletonMarginal(d=d, probs=probs, method="exact")
    if method == "quadrature":
        probs = {
            j: j * comb(d, j) * integral_I(j - 1, j, 2, d - j, spec) for j in range(1, d + 1)
        }
        return SingletonMarginal(d=d, probs=probs, method="quadrature")
    raise ValueError(f"unknown method {method!r}")


def mean_singletons(d: int) -> Fraction:
    """E[J] = H_d, the d-th harmonic number.

    Cross-checked here against the full marginal, so a regression in
    either route cannot pass silently.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    harmonic = sum((Fraction(1, i) for i in range(1, d + 1)), Fraction(0))
    if d <= 64:
        # cheap enough to verify term by term on every call
        from_marginal = singleton_marginal(d).mean()
        if from_marginal != harmonic:
            raise AssertionError("marginal mean disagrees with harmonic number")
    return harmonic


def gould_identity_check(n: int, x: Fraction) -> bool:
    """Verify the alternating partial-fraction identity at (n, x):

        sum_{k=0}^{n} (-1)^k C(n,k) / (x+k) = 1 / (x C(x+n, n))

    with the generalized binomial C(x+n, n) = prod_{i=1..n} (x+i) / n!.
    x must avoid the poles 0, -1, ..., -n.
    """
    if n < 0:
        raise ValueError("need n >= 0")
    x = Fraction(x)
    if any(x + k == 0 for k in range(n + 1)):
        raise ValueError("x hits a pole of the identity")
    lhs = sum((Fraction((-1) ** k * comb(n, k)) / (x + k) for k in range(n + 1)), Fraction(0))
    binom = Fraction(1)
    for i in range(1, n + 1):
        binom *= (x + i) / i
    return lhs == 1 / (x * binom)
