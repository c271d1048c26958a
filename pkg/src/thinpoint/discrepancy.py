"""Kolmogorov-Smirnov statistic (star discrepancy) of one-dimensional point sets."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .pointset import DomainError, PointSet, from_unsorted

__all__ = [
    "BridgeProfile",
    "ContractError",
    "bridge_profile",
    "ks_vs_cdf",
    "star_discrepancy",
    "star_discrepancy_bruteforce",
    "write_profile_csv",
]


class ContractError(ValueError):
    """A caller-supplied object broke the contract of an operation."""


def _require_nonempty(ps: PointSet):
    if ps.n == 0:
        raise DomainError("discrepancy is undefined for an empty point set")


def star_discrepancy(ps: PointSet) -> float:
    """Exact ``sup_x |#(ps ∩ [0, x]) / n - x|`` for sorted points.

    Uses the closed form ``max_i max(x_(i) - (i-1)/n, i/n - x_(i))``. The
    first term covers the left limit of the empirical CDF at each point, the
    second its value at the point. Ties need no special handling.
    """
    _require_nonempty(ps)
    x = ps.values
    n = x.size
    i = np.arange(1, n + 1, dtype=np.float64)
    upper = i / n - x
    lower = x - (i - 1) / n
    return float(max(upper.max(), lower.max()))


def star_discrepancy_bruteforce(ps: PointSet) -> float:
    """Evaluate ``|F_n(x) - x|`` at every candidate extremum and take the max.

    ``F_n(x) - x`` is piecewise linear with downward slope between jumps, so
    the supremum is attained at ``x = 0``, ``x = 1`` or at a one-sided limit
    at a data point. The counts here come from an explicit scan over the
    points rather than from their sorted positions.
    """
    _require_nonempty(ps)
    pts = np.asarray(ps.values)
    n = pts.size
    xs = np.unique(np.concatenate(([0.0, 1.0], pts)))
    at = (pts[None, :] <= xs[:, None]).sum(axis=1) / n
    below = (pts[None, :] < xs[:, None]).sum(axis=1) / n
    right = np.abs(at - xs)
    # no left limit at x = 0
    left = np.where(xs > 0.0, np.abs(below - xs), 0.0)
    return float(max(right.max(), left.max()))


def ks_vs_cdf(samples: Sequence[float], cdf: Callable) -> float:
    """KS distance between the empirical law of ``samples`` and ``cdf``.

    Computed as the star discrepancy of the images ``cdf(x_i)``, which is
    exact for a continuous ``cdf``.
    """
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.size == 0:
        raise DomainError("ks_vs_cdf needs at least one sample")
    images = np.asarray(cdf(samples), dtype=np.float64).ravel()
    if images.shape != samples.shape:
        raise ContractError("cdf must map each sample to exactly one value")
    bad = ~((images >= 0.0) & (images <= 1.0))
    if bad.any():
        i = int(np.argmax(bad))
        raise ContractError(f"cdf returned {images[i]!r} for sample {samples[i]!r}; must be in [0, 1]")
    return star_discrepancy(from_unsorted(images))


@dataclass(frozen=True)
class BridgeProfile:
    """Scaled empirical process ``sqrt(n) * (x_(i) - i/n)`` at positions ``i/n``."""

    position: np.ndarray
    deviation: np.ndarray

    @property
    def entries(self) -> list[tuple[float, float]]:
        return list(zip(self.position.tolist(), self.deviation.tolist()))

    def __len__(self):
        return int(self.position.size)

    def max_abs_deviation(self) -> float:
        return float(np.max(np.abs(self.deviation)))


def bridge_profile(ps: PointSet) -> BridgeProfile:
    _require_nonempty(ps)
    n = ps.n
    pos = np.arange(1, n + 1, dtype=np.float64) / n
    dev = np.sqrt(n) * (ps.values - pos)
    return BridgeProfile(pos, dev)


def write_profile_csv(profile: BridgeProfile, path: str | Path) -> None:
    """Write ``i,position,deviation`` rows at 17 significant digits."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "position", "deviation"])
        for i, (p, d) in enumerate(zip(profile.position, profile.deviation), start=1):
            w.writerow([i, f"{p:.17g}", f"{d:.17g}"])
