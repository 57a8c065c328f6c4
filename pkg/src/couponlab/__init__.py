"""Exact and Monte-Carlo analysis of coupon collection.

Modules:
    stirling    partition-count kernels (Stirling numbers, restricted blocks)
    race        two collectors racing: ties, leads, simultaneous finishes
    dixie       h copies of every type: pmf, expectations, growth law
    singletons  coupons held exactly once when the collection completes
    quadrature  the adaptive Gauss-Kronrod engine behind the numeric routes
    montecarlo  deterministic simulation of everything above
    cli         the couponlab command
"""

from .stirling import ExactRational, StirlingCache, assoc_stirling, stirling2
from .race import simultaneous_finish_prob, tie_then_ahead_prob
from .dixie import completion_pmf, expected_T, expected_T2_exact
from .singletons import joint_singleton_pmf, mean_singletons, singleton_marginal
from .montecarlo import SimConfig, estimate_event

__version__ = "0.1.0"

__all__ = [
    "ExactRational",
    "StirlingCache",
    "SimConfig",
    "assoc_stirling",
    "completion_pmf",
    "estimate_event",
    "expected_T",
    "expected_T2_exact",
    "joint_singleton_pmf",
    "mean_singletons",
    "simultaneous_finish_prob",
    "singleton_marginal",
    "stirling2",
    "tie_then_ahead_prob",
    "__version__",
]
