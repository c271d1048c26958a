"""Offline and online thinning of a sample down to equal per-bin counts."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .bounds import ThinningPlan
from .discrepancy import ContractError, star_discrepancy
from .pointset import DomainError, PointSet, bin_index, bin_indices

__all__ = [
    "Decision",
    "OnlineThinner",
    "ThinningReport",
    "Verdict",
    "finish",
    "offline_keep_mask",
    "offer",
    "online_thinner_new",
    "thin_offline",
    "water_level",
]


@dataclass(frozen=True)
class ThinningReport:
    """Audit record of one thinning run.

    ``effective_cap`` equals ``plan.cap`` unless short bins would have forced
    more than ``plan.m`` deletions; then it is raised just far enough to meet
    the budget and ``budget_binding`` is set. Bin indices in
    ``deficient_bins`` are 1-based.
    """

    plan: ThinningPlan
    n_in: int
    n_kept: int
    per_bin_in: list[int]
    per_bin_kept: list[int]
    deficient_bins: list[int]
    discrepancy_before: float | None
    discrepancy_after: float | None
    effective_cap: int | None = None
    budget_binding: bool = False

    @property
    def deletions(self) -> int:
        return self.n_in - self.n_kept

    def to_dict(self) -> dict:
        return {
            "plan": self.plan.to_dict(),
            "n_in": self.n_in,
            "n_kept": self.n_kept,
            "deletions": self.deletions,
            "per_bin_in": list(self.per_bin_in),
            "per_bin_kept": list(self.per_bin_kept),
            "deficient_bins": list(self.deficient_bins),
            "discrepancy_before": self.discrepancy_before,
            "discrepancy_after": self.discrepancy_after,
            "effective_cap": self.effective_cap,
            "budget_binding": self.budget_binding,
        }


def _disc(ps: PointSet) -> float | None:
    return star_discrepancy(ps) if ps.n else None


def water_level(counts, cap: int, budget: int) -> int:
    """Smallest keep level ``>= cap`` whose total excess fits in ``budget``."""
    counts = np.asarray(counts, dtype=np.int64)
    excess = lambda c: int(np.maximum(counts - c, 0).sum())  # noqa: E731
    if excess(cap) <= budget:
        return cap
    lo, hi = cap, int(counts.max())
    # excess() is non-increasing; find the first level within budget
    while lo < hi:
        mid = (lo + hi) // 2
        if excess(mid) <= budget:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _trivial_report(ps: PointSet, plan: ThinningPlan) -> ThinningReport:
    d = _disc(ps)
    return ThinningReport(plan, ps.n, ps.n, [ps.n], [ps.n], [], d, d)


def offline_keep_mask(ps: PointSet, plan: ThinningPlan, rng: np.random.Generator):
    """Boolean mask over ``ps.values`` selecting the points a Thin plan keeps.

    Returns ``(mask, per_bin_counts, keep_level)``.
    """
    k = plan.k
    counts = np.bincount(bin_indices(ps.values, k), minlength=k)
    level = water_level(counts, plan.cap, plan.m)
    keep = np.ones(ps.n, dtype=bool)
    # sorted input: each bin is a contiguous slice
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    for ell in range(k):
        c = int(counts[ell])
        if c > level:
            drop = rng.choice(c, size=c - level, replace=False)
            keep[starts[ell] + drop] = False
    return keep, counts, level


def thin_offline(ps: PointSet, plan: ThinningPlan,
                 rng: np.random.Generator) -> tuple[PointSet, ThinningReport]:
    """Cut every bin holding more than ``plan.cap`` points down to ``cap``.

    Each over-full bin loses a uniformly random subset of its points, drawn
    independently per bin from ``rng``. Bins at or below the cap are kept
    whole and listed as deficient. Deletions never exceed ``plan.m``.

    Raises
    ------
    ContractError
        If ``plan.n`` differs from ``ps.n``.
    """
    if plan.n != ps.n:
        raise ContractError(f"plan is for n = {plan.n} but the point set has {ps.n} points")
    if not plan.is_thin:
        return ps, _trivial_report(ps, plan)

    keep, counts, level = offline_keep_mask(ps, plan, rng)
    k, cap = plan.k, plan.cap
    kept = PointSet(ps.values[keep])
    per_bin_kept = np.minimum(counts, level)
    report = ThinningReport(
        plan=plan,
        n_in=ps.n,
        n_kept=kept.n,
        per_bin_in=counts.tolist(),
        per_bin_kept=per_bin_kept.tolist(),
        deficient_bins=[ell + 1 for ell in range(k) if counts[ell] < cap],
        discrepancy_before=_disc(ps),
        discrepancy_after=_disc(kept),
        effective_cap=level,
        budget_binding=level > cap,
    )
    return kept, report


class Verdict(str, Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    bin: object  # BinIndex, or None in the NoDeletion regime

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPT


@dataclass
class OnlineThinner:
    """Accept/reject points one at a time against fixed per-bin caps.

    A point is rejected when its bin already holds ``cap`` accepted points,
    unless ``plan.m`` rejections have already been made, after which
    everything is accepted. Not safe for concurrent calls.
    """

    plan: ThinningPlan
    accepted_counts: list[int] = field(init=False)
    offered_counts: list[int] = field(init=False)
    rejections: int = field(init=False, default=0)

    def __post_init__(self):
        nbins = self.plan.k if self.plan.is_thin else 1
        self.accepted_counts = [0] * nbins
        self.offered_counts = [0] * nbins

    def offer(self, x: float) -> Decision:
        if not (0.0 <= x <= 1.0):
            raise DomainError(f"x = {x!r} outside [0, 1]")
        if not self.plan.is_thin:
            self.offered_counts[0] += 1
            self.accepted_counts[0] += 1
            return Decision(Verdict.ACCEPT, None)
        b = bin_index(x, self.plan.k)
        i = b.ell - 1
        self.offered_counts[i] += 1
        if self.accepted_counts[i] >= self.plan.cap and self.rejections < self.plan.m:
            self.rejections += 1
            return Decision(Verdict.REJECT, b)
        self.accepted_counts[i] += 1
        return Decision(Verdict.ACCEPT, b)

    def finish(self, accepted: PointSet, offered: PointSet | None = None) -> ThinningReport:
        """Summarise the stream.

        ``accepted`` must be the multiset of accepted points. Passing the
        full ``offered`` set fills in ``discrepancy_before``.
        """
        n_kept = sum(self.accepted_counts)
        n_in = sum(self.offered_counts)
        if accepted.n != n_kept:
            raise ContractError(f"thinner accepted {n_kept} points but {accepted.n} were supplied")
        if offered is not None and offered.n != n_in:
            raise ContractError(f"thinner saw {n_in} points but {offered.n} were supplied")
        if self.plan.is_thin:
            got = np.bincount(bin_indices(accepted.values, self.plan.k), minlength=self.plan.k)
            if got.tolist() != self.accepted_counts:
                raise ContractError("accepted points do not match the thinner's per-bin counts")
            deficient = [i + 1 for i, c in enumerate(self.accepted_counts) if c < self.plan.cap]
            cap = self.plan.cap
        else:
            deficient, cap = [], None
        return ThinningReport(
            plan=self.plan,
            n_in=n_in,
            n_kept=n_kept,
            per_bin_in=list(self.offered_counts),
            per_bin_kept=list(self.accepted_counts),
            deficient_bins=deficient,
            discrepancy_before=_disc(offered) if offered is not None else None,
            discrepancy_after=_disc(accepted),
            effective_cap=cap,
            budget_binding=self.plan.is_thin and self.rejections >= self.plan.m
            and any(c > cap for c in self.accepted_counts),
        )

    def run(self, stream) -> tuple[PointSet, ThinningReport]:
        """Feed ``stream`` in order and return the kept set with its report."""
        xs = np.asarray(stream, dtype=np.float64)
        keep = np.fromiter((self.offer(float(x)).accepted for x in xs), dtype=bool, count=xs.size)
        kept = PointSet(np.sort(xs[keep]))
        return kept, self.finish(kept, PointSet(np.sort(xs)))


def online_thinner_new(plan: ThinningPlan) -> OnlineThinner:
    return OnlineThinner(plan)


def offer(thinner: OnlineThinner, x: float) -> Decision:
    return thinner.offer(x)


def finish(thinner: OnlineThinner, accepted: PointSet,
           offered: PointSet | None = None) -> ThinningReport:
    return thinner.finish(accepted, offered)
