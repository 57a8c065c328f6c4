"""Command line front end.

Four subcommands:

    exact      closed-form / series quantities (fraction plus decimal)
    simulate   Monte-Carlo estimates: race events, collector means
    compare    exact vs simulated, gated by a 4 sigma z-score
    table      the reference sequences in one shot

Records stream to stdout as JSON Lines (default) or CSV via --format.
Exit codes: 0 success, 2 usage error, 3 a tolerance could not be
certified, 4 simulation disagrees with the exact value beyond 4 sigma.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import dixie, race, singletons, stirling
from .montecarlo import (
    DEFAULT_SEED,
    EVENTS,
    SimConfig,
    estimate_event,
    estimate_mean_singletons,
    estimate_mean_T,
)
from .quadrature import ConvergenceError

CSV_HEADER = ("quantity", "params", "exact", "decimal", "method", "std_error", "seed")

EXACT_QUANTITIES = (
    "simultaneous",
    "tie-ahead",
    "expected-T",
    "expected-T2",
    "asymptotic-T",
    "pmf",
    "singleton-marginal",
    "mean-singletons",
    "stirling",
    "assoc-stirling",
)
COMPARE_QUANTITIES = ("simultaneous", "tie-ahead", "mean-T", "mean-singletons")
TABLES = ("simultaneous-seq", "tie-ahead-seq", "expected-T-h1-h2", "avgxact-seq")


@dataclass(frozen=True)
class OutputRecord:
    """One output row; every emitter in this module speaks this schema."""

    quantity: str
    params: dict[str, int] = field(default_factory=dict)
    exact: str | None = None
    decimal: float | None = None
    method: str = "closed-form"
    std_error: float | None = None
    seed: int | None = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "quantity": self.quantity,
                "params": self.params,
                "exact": self.exact,
                "decimal": self.decimal,
                "method": self.method,
                "std_error": self.std_error,
                "seed": self.seed,
            }
        )

    @classmethod
    def from_json(cls, line: str) -> "OutputRecord":
        obj = json.loads(line)
        return cls(
            quantity=obj["quantity"],
            params=dict(obj["params"]),
            exact=obj["exact"],
            decimal=obj["decimal"],
            method=obj["method"],
            std_error=obj["std_error"],
            seed=obj["seed"],
        )

    def csv_row(self) -> list[str]:
        return [
            self.quantity,
            ";".join(f"{k}={v}" for k, v in self.params.items()),
            self.exact if self.exact is not None else "",
            repr(self.decimal) if self.decimal is not None else "",
            self.method,
            repr(self.std_error) if self.std_error is not None else "",
            str(self.seed) if self.seed is not None else "",
        ]


def _sig(value: float, digits: int) -> float:
    """Round to `digits` significant figures (what --digits controls)."""
    return float(f"{float(value):.{digits}g}")


def _rec(
    quantity: str,
    params: dict[str, int],
    digits: int,
    value: Fraction | float | int | None = None,
    method: str = "closed-form",
    std_error: float | None = None,
    seed: int | None = None,
) -> OutputRecord:
    exact = None
    decimal = None
    if isinstance(value, (Fraction, int)):
        v = Fraction(value)
        exact = f"{v.numerator}/{v.denominator}"
        decimal = _sig(float(v), digits)
    elif value is not None:
        decimal = _sig(value, digits)
    return OutputRecord(
        quantity=quantity,
        params=params,
        exact=exact,
        decimal=decimal,
        method=method,
        std_error=_sig(std_error, digits) if std_error is not None else None,
        seed=seed,
    )


def _emit(records: list[OutputRecord], args) -> None:
    if args.format == "json":
        for r in records:
            print(r.to_json())
    else:
        print(",".join(CSV_HEADER))
        for r in records:
            print(",".join(r.csv_row()))


def _need(args, *names: str) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            raise ValueError(f"--{name} is required for this quantity")


def cmd_exact(args) -> int:
    q = args.quantity
    digits = args.digits
    recs: list[OutputRecord] = []
    if q == "simultaneous":
        _need(args, "d")
        recs.append(_rec(q, {"d": args.d}, digits, race.simultaneous_finish_prob(args.d)))
    elif q == "tie-ahead":
        _need(args, "d")
        recs.append(_rec(q, {"d": args.d}, digits, race.tie_then_ahead_prob(args.d)))
    elif q == "expected-T":
        _need(args, "d")
        v = dixie.expected_T(args.d, args.h, Fraction(args.tolerance))
        recs.append(
            _rec(q, {"d": args.d, "h": args.h}, digits, float(v), method="series")
        )
    elif q == "expected-T2":
        _need(args, "d")
        recs.append(_rec(q, {"d": args.d}, digits, dixie.expected_T2_exact(args.d)))
    elif q == "asymptotic-T":
        _need(args, "d")
        v = dixie.asymptotic_T(args.d, args.h)
        recs.append(_rec(q, {"d": args.d, "h": args.h}, digits, v, method="asymptotic"))
    elif q == "pmf":
        _need(args, "d", "n")
        v = dixie.completion_pmf(args.d, args.h, args.n)
        recs.append(_rec(q, {"d": args.d, "h": args.h, "n": args.n}, digits, v))
    elif q == "singleton-marginal":
        _need(args, "d")
        marginal = singletons.singleton_marginal(args.d, method=args.method)
        method = "closed-form" if marginal.method == "exact" else "quadrature"
        for j, p in sorted(marginal.probs.items()):
            if args.j is not None and j != args.j:
                continue
            recs.append(_rec(q, {"d": args.d, "j": j}, digits, p, method=method))
        if args.j is not None and not recs:
            raise ValueError(f"--j must lie in 1..{args.d}")
    elif q == "mean-singletons":
        _need(args, "d")
        recs.append(_rec(q, {"d": args.d}, digits, singletons.mean_singletons(args.d)))
    elif q == "stirling":
        _need(args, "n", "k")
        recs.append(
            _rec(q, {"n": args.n, "k": args.k}, digits, stirling.stirling2(args.n, args.k))
        )
    elif q == "assoc-stirling":
        _need(args, "n", "k")
        v = stirling.assoc_stirling(args.n, args.k, args.h)
        recs.append(_rec(q, {"n": args.n, "k": args.k, "h": args.h}, digits, v))
    else:
        raise ValueError(f"unknown quantity {q!r}")
    _emit(recs, args)
    return 0


def cmd_simulate(args) -> int:
    digits = args.digits
    if args.target == "race":
        config = SimConfig(d=args.d, trials=args.trials, master_seed=args.seed)
        res = estimate_event(args.event, config)
        recs = [
            _rec(
                args.event,
                {"d": args.d, "trials": args.trials},
                digits,
                res.estimate,
                method="monte-carlo",
                std_error=res.std_error,
                seed=args.seed,
            )
        ]
    else:
        config = SimConfig(d=args.d, trials=args.trials, h=args.h, master_seed=args.seed)
        res = estimate_mean_T(config)
        params = {"d": args.d, "h": args.h, "trials": args.trials}
        recs = [
            _rec(
                "mean-T",
                params,
                digits,
                res.estimate,
                method="monte-carlo",
                std_error=res.std_error,
                seed=args.seed,
            )
        ]
        if args.h == 1:
            res_j = estimate_mean_singletons(config)
            recs.append(
                _rec(
                    "mean-singletons",
                    params,
                    digits,
                    res_j.estimate,
                    method="monte-carlo",
                    std_error=res_j.std_error,
                    seed=args.seed,
                )
            )
    _emit(recs, args)
    return 0


def cmd_compare(args) -> int:
    q = args.quantity
    digits = args.digits
    config = SimConfig(d=args.d, trials=args.trials, h=args.h, master_seed=args.seed)
    if q == "simultaneous":
        exact = race.simultaneous_finish_prob(args.d)
        method = "closed-form"
        res = estimate_event("simultaneous", config)
        params = {"d": args.d}
    elif q == "tie-ahead":
        exact = race.tie_then_ahead_prob(args.d)
        method = "closed-form"
        res = estimate_event("tie-then-ahead", config)
        params = {"d": args.d}
    elif q == "mean-T":
        exact = dixie.expected_T(args.d, args.h, Fraction(args.tolerance))
        method = "series"
        res = estimate_mean_T(config)
        params = {"d": args.d, "h": args.h}
    elif q == "mean-singletons":
        exact = singletons.mean_singletons(args.d)
        method = "closed-form"
        res = estimate_mean_singletons(config)
        params = {"d": args.d}
    else:
        raise ValueError(f"unknown quantity {q!r}")

    if res.std_error > 0:
        z = (res.estimate - float(exact)) / res.std_error
    else:
        z = 0.0 if res.estimate == float(exact) else math.inf

    recs = [
        _rec(q, params, digits, exact, method=method),
        _rec(
            q,
            {**params, "trials": args.trials},
            digits,
            res.estimate,
            method="monte-carlo",
            std_error=res.std_error,
            seed=args.seed,
        ),
        _rec(f"{q}-z", params, digits, z, method="monte-carlo", seed=args.seed),
    ]
    _emit(recs, args)
    return 0 if abs(z) <= 4.0 else 4


def cmd_table(args) -> int:
    name = args.name
    digits = args.digits
    recs: list[OutputRecord] = []
    if name == "simultaneous-seq":
        for d in range(1, 9):
            recs.append(_rec("simultaneous", {"d": d}, digits, race.simultaneous_finish_prob(d)))
    elif name == "tie-ahead-seq":
        for d in range(1, 11):
            recs.append(_rec("tie-ahead", {"d": d}, digits, race.tie_then_ahead_prob(d)))
    elif name == "expected-T-h1-h2":
        for h in (1, 2):
            for d in range(1, 11):
                v = dixie.expected_T(d, h, Fraction(args.tolerance))
                recs.append(_rec("expected-T", {"d": d, "h": h}, digits, float(v), method="series"))
    elif name == "avgxact-seq":
        for d in range(1, 5):
            recs.append(_rec("expected-T2", {"d": d}, digits, dixie.expected_T2_exact(d)))
    else:
        raise ValueError(f"unknown table {name!r}")
    _emit(recs, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--digits", type=int, default=6, help="significant figures in output")
    common.add_argument("--tolerance", type=float, default=1e-10)

    parser = argparse.ArgumentParser(
        prog="couponlab",
        description="Exact and Monte-Carlo coupon collector analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_exact = sub.add_parser("exact", parents=[common], help="closed-form quantities")
    p_exact.add_argument("quantity", choices=EXACT_QUANTITIES)
    p_exact.add_argument("--d", type=int)
    p_exact.add_argument("--h", type=int, default=1)
    p_exact.add_argument("--n", type=int)
    p_exact.add_argument("--k", type=int)
    p_exact.add_argument("--j", type=int)
    p_exact.add_argument("--method", choices=("exact", "quadrature"), default="exact")
    p_exact.set_defaults(func=cmd_exact)

    p_sim = sub.add_parser("simulate", parents=[common], help="Monte-Carlo estimates")
    sim_sub = p_sim.add_subparsers(dest="target", required=True)
    p_race = sim_sub.add_parser("race", parents=[common])
    p_race.add_argument("--d", type=int, required=True)
    p_race.add_argument("--event", choices=EVENTS, required=True)
    p_race.add_argument("--trials", type=int, default=100000)
    p_race.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_race.set_defaults(func=cmd_simulate)
    p_coll = sim_sub.add_parser("collector", parents=[common])
    p_coll.add_argument("--d", type=int, required=True)
    p_coll.add_argument("--h", type=int, default=1)
    p_coll.add_argument("--trials", type=int, default=100000)
    p_coll.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_coll.set_defaults(func=cmd_simulate)

    p_cmp = sub.add_parser("compare", parents=[common], help="exact vs simulated")
    p_cmp.add_argument("quantity", choices=COMPARE_QUANTITIES)
    p_cmp.add_argument("--d", type=int, required=True)
    p_cmp.add_argument("--h", type=int, default=1)
    p_cmp.add_argument("--trials", type=int, default=100000)
    p_cmp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_cmp.set_defaults(func=cmd_compare)

    p_tab = sub.add_parser("table", parents=[common], help="reference sequences")
    p_tab.add_argument("name", choices=TABLES)
    p_tab.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
