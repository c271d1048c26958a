"""Seeded Monte Carlo experiments for the thinning procedure.

Every trial draws its own generator from ``(master_seed, trial_index)``::

    seed = splitmix64(master_seed ^ trial_index)

where ``splitmix64`` is the standard 64-bit finaliser (Steele, Lea and
Flood). It is a bijection on 64-bit words, so distinct trial indices get
distinct seeds, and results do not depend on the order trials run in.
"""
from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from ._io import OutputError, atomic_path
from .bounds import plan_thinning, proof_bound, theorem_bound
from .discrepancy import bridge_profile, write_profile_csv
from .distributions import DistributionSpec, Uniform01, parse_distribution
from .pointset import DomainError, PointSet, from_unsorted
from .thinning import OnlineThinner, thin_offline

__all__ = [
    "PRESETS",
    "SweepResult",
    "TrialConfig",
    "TrialRecord",
    "derive_seed",
    "emit_profiles",
    "run_sweep",
    "run_trial",
    "splitmix64",
]

MASK64 = (1 << 64) - 1

# named c_lambda settings
PRESETS = {
    "paper-safe": 10.0,
    "figure-1": 1.0,
}


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, trial_index: int) -> int:
    return splitmix64((master_seed ^ trial_index) & MASK64)


@dataclass(frozen=True)
class TrialConfig:
    n: int
    m: int
    c_lambda: float = 10.0
    distribution: DistributionSpec = field(default_factory=Uniform01)
    master_seed: int = 0
    mode: str = "offline"

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"n must be at least 2, got {self.n}")
        if self.mode not in ("offline", "online"):
            raise DomainError(f"mode must be 'offline' or 'online', got {self.mode!r}")
        if not 0 <= self.master_seed <= MASK64:
            raise DomainError("master_seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "c_lambda": self.c_lambda,
            "distribution": str(self.distribution),
            "master_seed": self.master_seed,
            "mode": self.mode,
        }

    @classmethod
    def from_dict(cls, d: dict) -> TrialConfig:
        d = dict(d)
        d["distribution"] = parse_distribution(d["distribution"])
        return cls(**d)


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    seed_used: int
    m: int
    regime: str
    k: int | None
    disc_before: float
    disc_after: float
    n_kept: int
    deletions: int
    deficient_count: int
    theorem_bound_value: float | None
    proof_bound_value: float
    bridge_max_before: float
    bridge_max_after: float

    @property
    def violated(self) -> bool:
        return self.disc_after > self.proof_bound_value


def _draw(config: TrialConfig, trial_index: int):
    seed = derive_seed(config.master_seed, trial_index)
    rng = np.random.default_rng(seed)
    raw = config.distribution.sample(config.n, rng)
    # arrival order is the draw order
    images = np.atleast_1d(config.distribution.cdf(raw))
    return seed, rng, images


def run_trial(config: TrialConfig, trial_index: int, *,
              return_sets: bool = False):
    """One draw, plan and thin; returns a :class:`TrialRecord`.

    With ``return_sets`` the uniform-scale point sets before and after
    thinning are returned as well, as ``(record, before, after)``.

    In the no-deletion regime ``proof_bound_value`` is ``proof_bound(n, 1)``,
    the plain DKW level for the untouched sample.
    """
    plan = plan_thinning(config.n, config.m, config.c_lambda)
    seed, rng, images = _draw(config, trial_index)
    before = from_unsorted(images)
    if config.mode == "online":
        after, report = OnlineThinner(plan).run(images)
    else:
        after, report = thin_offline(before, plan, rng)
    k = plan.k if plan.is_thin else 1
    record = TrialRecord(
        trial_index=trial_index,
        seed_used=seed,
        m=config.m,
        regime=plan.regime.value,
        k=plan.k,
        disc_before=report.discrepancy_before,
        disc_after=report.discrepancy_after,
        n_kept=report.n_kept,
        deletions=report.deletions,
        deficient_count=len(report.deficient_bins),
        theorem_bound_value=theorem_bound(config.n, config.m) if config.m >= 1 else None,
        proof_bound_value=proof_bound(report.n_kept, k),
        bridge_max_before=bridge_profile(before).max_abs_deviation(),
        bridge_max_after=bridge_profile(after).max_abs_deviation(),
    )
    if return_sets:
        return record, before, after
    return record


def _quantiles(values) -> dict:
    q10, q50, q90 = np.quantile(np.asarray(values, dtype=np.float64), [0.1, 0.5, 0.9])
    return {"median": float(q50), "q10": float(q10), "q90": float(q90)}


@dataclass
class SweepResult:
    configs: list[TrialConfig]
    records: list[TrialRecord]

    def summary(self) -> dict:
        out = {"per_m": [], "violation_rate": self.violation_rate}
        for cfg in self.configs:
            recs = [r for r in self.records if r.m == cfg.m]
            if not recs:
                continue
            out["per_m"].append({
                "n": cfg.n,
                "m": cfg.m,
                "trials": len(recs),
                "disc_before": _quantiles([r.disc_before for r in recs]),
                "disc_after": _quantiles([r.disc_after for r in recs]),
                "violation_rate": sum(r.violated for r in recs) / len(recs),
            })
        return out

    @property
    def violation_rate(self) -> float:
        if not self.records:
            return 0.0
        return sum(r.violated for r in self.records) / len(self.records)

    def to_dict(self) -> dict:
        base = self.configs[0].to_dict() if self.configs else {}
        base["m_values"] = [c.m for c in self.configs]
        base.pop("m", None)
        return {
            "config": base,
            "records": [asdict(r) for r in self.records],
            "summary": self.summary(),
        }

    def to_json(self) -> str:
        # repr-based float formatting in json round-trips doubles exactly
        return json.dumps(self.to_dict(), indent=2)

    def write_json(self, path: str | Path) -> None:
        with atomic_path(path) as tmp:
            tmp.write_text(self.to_json() + "\n", encoding="utf-8")

    def write_csv(self, path: str | Path) -> None:
        names = list(TrialRecord.__dataclass_fields__)
        with atomic_path(path) as tmp, open(tmp, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(names)
            for r in self.records:
                row = []
                for name in names:
                    v = getattr(r, name)
                    row.append(f"{v:.17g}" if isinstance(v, float) else ("" if v is None else v))
                w.writerow(row)


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("THINPOINT_THREADS")
    if env:
        try:
            v = int(env)
        except ValueError:
            raise DomainError(f"THINPOINT_THREADS must be a positive integer, got {env!r}") from None
        if v < 1:
            raise DomainError(f"THINPOINT_THREADS must be a positive integer, got {env!r}")
        return v
    return 1


def run_sweep(config: TrialConfig, trials: int, m_values: Sequence[int] | None = None,
              workers: int | None = None) -> SweepResult:
    """Run ``trials`` trials for each budget in ``m_values``.

    Trial ``t`` of the ``j``-th budget uses index ``j * trials + t``, so every
    trial in the sweep has its own seed. Records are ordered by index
    whatever the degree of parallelism (``workers``, or the
    ``THINPOINT_THREADS`` environment variable; default 1).
    """
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")
    if m_values is None:
        m_values = [config.m]
    configs = [replace(config, m=int(m)) for m in m_values]
    for cfg in configs:
        # fail fast on an invalid budget before running anything
        plan_thinning(cfg.n, cfg.m, cfg.c_lambda)
    jobs = [(cfg, j * trials + t) for j, cfg in enumerate(configs) for t in range(trials)]
    nworkers = _worker_count(workers)
    if nworkers == 1:
        records = [run_trial(cfg, idx) for cfg, idx in jobs]
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            records = list(pool.map(lambda job: run_trial(*job), jobs))
    records.sort(key=lambda r: r.trial_index)
    return SweepResult(configs, records)


def emit_profiles(ps_before: PointSet, ps_after: PointSet, path: str | Path) -> tuple[Path, Path]:
    """Write ``before.csv`` and ``after.csv`` bridge profiles into directory ``path``."""
    if ps_before.n == 0 or ps_after.n == 0:
        raise DomainError("both point sets must be non-empty")
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {path}: {exc.strerror or exc}") from exc
    out = []
    for name, ps in (("before.csv", ps_before), ("after.csv", ps_after)):
        target = path / name
        with atomic_path(target) as tmp:
            write_profile_csv(bridge_profile(ps), tmp)
        out.append(target)
    return out[0], out[1]

