"""Regularize i.i.d. samples on the line by deleting a few points.

Splitting [0, 1] into equal bins and cutting every bin down to the same
count drops the Kolmogorov-Smirnov statistic of ``n`` uniform points from
order ``sqrt(log n / n)`` to order ``log(n) / m`` while deleting at most
``m`` points. Other continuous laws are handled through their CDF.
"""
from .bounds import (
    Regime,
    ThinningPlan,
    binning_failure_prob,
    chernoff_lower_tail,
    dkw_tail,
    kolmogorov_sf,
    plan_thinning,
    proof_bound,
    theorem_bound,
)
from .discrepancy import (
    BridgeProfile,
    ContractError,
    bridge_profile,
    ks_vs_cdf,
    star_discrepancy,
    star_discrepancy_bruteforce,
)
from .distributions import (
    CustomDistribution,
    DistributionSpec,
    Exponential,
    Normal,
    Uniform01,
    parse_distribution,
    transform_to_uniform,
)
from .harness import SweepResult, TrialConfig, TrialRecord, emit_profiles, run_sweep, run_trial
from .pointset import BinIndex, DomainError, PointSet, bin_counts, bin_index, from_unsorted, max_gap
from .thinning import Decision, OnlineThinner, ThinningReport, Verdict, thin_offline

__version__ = "0.1.0"
