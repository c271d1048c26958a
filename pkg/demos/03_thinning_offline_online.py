"""Thin a uniform sample offline, then the same stream online.

Run: python demos/03_thinning_offline_online.py
"""
import numpy as np

from thinpoint import OnlineThinner, from_unsorted, plan_thinning, thin_offline

n, m = 100_000, 5000
rng = np.random.default_rng(42)
stream = rng.random(n)
plan = plan_thinning(n, m, c_lambda=1.0)
print(plan)

kept, report = thin_offline(from_unsorted(stream), plan, rng)
print(f"offline: kept {report.n_kept} of {report.n_in}, "
      f"D before {report.discrepancy_before:.2e}, after {report.discrepancy_after:.2e}")

# the online thinner only sees one point at a time
online = OnlineThinner(plan)
accepted = [x for x in stream if online.offer(x).accepted]
orep = online.finish(from_unsorted(accepted), from_unsorted(stream))
print(f"online:  kept {orep.n_kept}, D after {orep.discrepancy_after:.2e}")
print("same per-bin counts:", report.per_bin_kept == orep.per_bin_kept)

# each cell boundary l/k now splits the kept set exactly
k = plan.k
print("F_Y(l/k) - l/k at cell edges:",
      max(abs(np.sum(kept.values < ell / k) / kept.n - ell / k) for ell in range(1, k)))
