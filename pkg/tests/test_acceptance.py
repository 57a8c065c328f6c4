"""Acceptance gate: the deliverable's headline results, one criterion per test.

Each criterion prints a single line

    ACCEPTANCE <n> PASS|FAIL: <description>

so a transcript of this module is a checklist.  Stated time budgets
are asserted, not advisory.
"""

import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from math import comb

import pytest

from conftest import (
    enum_disjoint_pairs,
    enum_frame,
    enum_init_seg,
    enum_sigma,
    enum_tail,
    psi_series,
    restricted_partition_table,
)
from couponlab.cli import OutputRecord, main
from couponlab.dixie import asymptotic_T, expected_T, pgf_numeric
from couponlab.montecarlo import SimConfig, _load_backend
from couponlab.race import (
    frame_prob,
    gv_det,
    init_seg,
    psi,
    simultaneous_finish_prob,
    sum_paths_prob,
    tail_prob,
    tie_then_ahead_prob,
)
from couponlab.singletons import gould_identity_check, mean_singletons, singleton_marginal
from couponlab.stirling import assoc_stirling


@contextmanager
def criterion(num: int, description: str):
    t0 = time.time()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {num} FAIL: {description}", flush=True)
        raise
    print(f"ACCEPTANCE {num} PASS: {description} ({time.time() - t0:.1f}s)", flush=True)


def test_criterion_1_simultaneous_finish_fractions():
    golden = {
        1: Fraction(1),
        2: Fraction(1, 3),
        3: Fraction(11, 70),
        4: Fraction(9, 91),
        5: Fraction(688877, 9561123),
        6: Fraction(358555, 6330324),
        7: Fraction(2730269557627901, 58560931675094420),
        8: Fraction(146271649897951, 3695016639410525),
    }
    with criterion(1, "simultaneous-finish probability, exact fractions d=1..8, <10s"):
        t0 = time.time()
        for d, want in golden.items():
            assert simultaneous_finish_prob(d) == want, d
        assert time.time() - t0 < 10.0


def test_criterion_2_tie_then_ahead_sequence():
    fractions = {
        1: Fraction(1),
        2: Fraction(2, 3),
        3: Fraction(43, 70),
        4: Fraction(986, 2275),
        5: Fraction(5672893, 19122246),
    }
    decimals = [1.0, 0.66667, 0.61429, 0.43341, 0.29667,
                0.21177, 0.16016, 0.12748, 0.10551, 0.08988]
    with criterion(2, "tie-then-ahead: exact d<=5, decimals within 1e-5 d=1..10, <2min"):
        t0 = time.time()
        for d, want in fractions.items():
            assert tie_then_ahead_prob(d) == want, d
        for d, printed in enumerate(decimals, start=1):
            assert abs(float(tie_then_ahead_prob(d)) - printed) <= 1e-5, d
        assert time.time() - t0 < 120.0


def _ulp_of_last_sig_digit(value: float, digits: int = 5) -> float:
    return 10.0 ** (math.floor(math.log10(abs(value))) - digits + 1)


def test_criterion_3_expectation_tables(capsys):
    # reference decimals; the d=9, h=1 entry is printed one ulp low
    # (9 H_9 = 25.46071... shows as 25.460), so entries are held to one
    # unit in the last significant digit rather than bit equality
    h1 = [1.0, 3.0, 5.5, 8.3333, 11.417, 14.7, 18.15, 21.743, 25.46, 29.29]
    h2 = [2.0, 5.5, 9.6389, 14.189, 19.041, 24.134, 29.425, 34.885, 40.492, 46.23]
    with criterion(3, "expectation tables at 5 significant figures, d=1..10, h=1 and 2"):
        assert main(["table", "expected-T-h1-h2", "--digits", "5"]) == 0
        recs = [OutputRecord.from_json(l) for l in capsys.readouterr().out.splitlines()]
        got_h1 = [r.decimal for r in recs if r.params["h"] == 1]
        got_h2 = [r.decimal for r in recs if r.params["h"] == 2]
        for got, want in zip(got_h1 + got_h2, h1 + h2):
            assert abs(got - want) <= _ulp_of_last_sig_digit(want) + 1e-12, (got, want)
        assert sum(g != w for g, w in zip(got_h1, h1)) <= 1
        assert got_h2 == h2
        assert main(["table", "avgxact-seq"]) == 0
        recs = [OutputRecord.from_json(l) for l in capsys.readouterr().out.splitlines()]
        assert [r.exact for r in recs] == ["2/1", "11/2", "347/36", "12259/864"]


def test_criterion_4_large_d_expectation():
    with criterion(4, "d=200, h=2: series expectation rounds to 1614, asymptotic to 1393, <5min"):
        t0 = time.time()
        assert round(float(expected_T(200, 2))) == 1614
        assert round(asymptotic_T(200, 2)) == 1393
        assert time.time() - t0 < 300.0


def test_criterion_5_singleton_means():
    with criterion(5, "mean singletons = H_d exactly d<=30; quadrature within 1e-9 d<=10"):
        for d in range(1, 31):
            assert mean_singletons(d) == sum(Fraction(1, i) for i in range(1, d + 1)), d
        for d in range(1, 11):
            exact = singleton_marginal(d, method="exact")
            quad = singleton_marginal(d, method="quadrature")
            for j in range(1, d + 1):
                assert abs(float(exact.probs[j]) - quad.probs[j]) <= 1e-9, (d, j)


def test_criterion_6_enumeration_equivalences():
    with criterion(6, "closed forms = brute-force enumeration; psi certified to 1e-30; <3min"):
        t0 = time.time()
        # lattice-path weights, all endpoints d<=4 with spans <= 6
        for d in range(1, 5):
            for b1 in range(d + 1):
                for span in range(7):
                    for b2 in range(b1, min(d, b1 + span) + 1):
                        assert sum_paths_prob((0, b1), (span, b2), d) == enum_sigma(
                            0, b1, span, b2, d
                        )
                        assert tail_prob(0, b1, span, b2, d) == enum_tail(
                            0, b1, span, b2, d
                        )
        # vertex-disjoint pairs with the race's shifted endpoints, n <= 9
        for d in range(2, 5):
            for d1 in range(1, d):
                for d2 in range(d1, d):
                    for k in range(1, 4):
                        for n in range(k + 2, 10):
                            assert gv_det(d, d1, d2, k, n) == enum_disjoint_pairs(
                                d, d1, d2, k, n
                            )
        # tied prefixes and endpoint-sharing frames
        for d in range(2, 5):
            for d1 in range(1, d + 1):
                for k in range(9):
                    assert init_seg(d, d1, k) == enum_init_seg(d, d1, k)
            for span in range(2, 7):
                for j1 in range(1, d + 1):
                    for j2 in range(j1 + 1, d + 1):
                        assert frame_prob(0, j1, span, j2, d) == enum_frame(
                            0, j1, span, j2, d
                        )
        # resummation kernel against its certified series, every admissible
        # (r, s, t) with s, t <= 2d
        target = Fraction(1, 10**30)
        for d in range(2, 7):
            for r in range(1, d):
                for s in range(1, 2 * d + 1):
                    for t in range(1, 2 * d + 1):
                        if s * t >= d * d:
                            continue
                        partial, bound = psi_series(d, r, s, t, target)
                        assert bound <= target
                        v = psi(d, r, s, t)
                        assert partial <= v <= partial + bound, (d, r, s, t)
        # h-restricted block counts against full set-partition enumeration
        for n in range(13):
            table = restricted_partition_table(n, h_max=3)
            for h in (1, 2, 3):
                for k in range(n + 2):
                    assert assoc_stirling(n, k, h) == table[h].get(k, 0), (n, k, h)
        assert time.time() - t0 < 180.0


def test_criterion_7_identity_suite():
    with criterion(7, "identity suite: partial fractions, index collapse, pgf mass, operator law"):
        # alternating partial-fraction identity at rational points
        xs = [Fraction(1, 2), Fraction(5, 7), Fraction(3), Fraction(-1, 3), Fraction(13, 4)]
        for n in range(11):
            for x in xs:
                assert gould_identity_check(n, x), (n, x)
        # the trailer-height sum collapses exactly on 1 <= t <= d-1 ...
        for d in range(2, 13):
            for d1 in range(1, d):
                for t in range(d1, d):
                    lhs = sum(
                        (-1) ** d2 * comb(d - d1, d - d2) * comb(d2 - d1, t - d1)
                        for d2 in range(d1, d)
                    )
                    assert lhs == (-1) ** (d + 1) * comb(d - d1, d - t), (d, d1, t)
        # ... and genuinely breaks at the t = d boundary
        assert any(
            sum(
                (-1) ** d2 * comb(d - d1, d - d2) * comb(d2 - d1, d - d1)
                for d2 in range(d1, d)
            )
            != (-1) ** (d + 1)
            for d in range(2, 8)
            for d1 in range(1, d)
        )
        # the pgf integral carries unit mass at x = 1
        for d, h in ((3, 1), (3, 2), (4, 3)):
            assert pgf_numeric(d, h, 1.0) == pytest.approx(1.0, abs=1e-8)
        # the differential recursion behind the integral transform,
        # checked by nested central differences
        def xD_minus(c, f, eps_rel=1e-4):
            def g(x):
                e = eps_rel * x
                return x * (f(x + e) - f(x - e)) / (2 * e) - c * f(x)

            return g

        rng = random.Random(7)
        for _ in range(10):
            x = 0.5 + 2.5 * rng.random()
            a = 0.5 + 1.5 * rng.random()
            # (xD - 1)[x e^(-a/x)] = a e^(-a/x)
            f2 = lambda u: u * math.exp(-a / u)
            rhs2 = a * math.exp(-a / x)
            assert abs(xD_minus(1, f2)(x) - rhs2) / rhs2 < 1e-6
            # (1/2)(xD - 1)(xD - 2)[x^2 e^(-a/x)] = (a^2/2) e^(-a/x)
            f3 = lambda u: u * u * math.exp(-a / u)
            rhs3 = a * a / 2 * math.exp(-a / x)
            assert abs(0.5 * xD_minus(1, xD_minus(2, f3))(x) - rhs3) / rhs3 < 1e-6


def test_criterion_8_monte_carlo_agreement(capsys):
    with criterion(8, "Monte-Carlo at 1e6 trials (seed 42) within 4 sigma of every exact value"):
        trials = ["--trials", "1000000"]
        for d in range(2, 7):
            assert main(["compare", "simultaneous", "--d", str(d)] + trials) == 0, d
            assert main(["compare", "tie-ahead", "--d", str(d)] + trials) == 0, d
        assert main(["compare", "mean-T", "--d", "5", "--h", "1"] + trials) == 0
        assert main(["compare", "mean-T", "--d", "5", "--h", "2"] + trials) == 0
        assert main(["compare", "mean-singletons", "--d", "6"] + trials) == 0
        capsys.readouterr()
        # the third event has no closed form; pin its sanity instead:
        # counts are reproducible and nest inside tie-then-ahead's bound
        import numpy as np

        backend = _load_backend()
        a = tuple(int(v) for v in backend.race_counts(4, 1000000, 0, np.uint64(42)))
        b = tuple(int(v) for v in backend.race_counts(4, 1000000, 0, np.uint64(42)))
        assert a == b
        sim, tta, nb = a
        assert tta <= nb <= 1000000 - sim
