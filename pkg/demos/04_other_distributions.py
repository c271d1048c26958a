"""Thinning a normal sample through its CDF.

Run: python demos/04_other_distributions.py
"""
import numpy as np

from thinpoint import Normal, ks_vs_cdf, plan_thinning, transform_to_uniform
from thinpoint.thinning import offline_keep_mask

spec = Normal(10.0, 3.0)
n, m = 100_000, 5000
rng = np.random.default_rng(7)
x = np.sort(spec.sample(n, rng))

u = transform_to_uniform(x, spec)
plan = plan_thinning(n, m, c_lambda=1.0)
keep, _, _ = offline_keep_mask(u, plan, rng)

print(f"KS vs N(10, 9) before: {ks_vs_cdf(x, spec.cdf):.2e}")
print(f"KS vs N(10, 9) after deleting {n - keep.sum()} points: {ks_vs_cdf(x[keep], spec.cdf):.2e}")
