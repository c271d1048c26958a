"""From a sample size and a deletion budget to a thinning plan.

Run: python demos/02_plans_and_bounds.py
"""
import math

from thinpoint import bounds

n = 100_000
print(f"budgets below {bounds.no_deletion_threshold(n):.0f} are not spent at n = {n}")

for m in (1000, 3500, 5000, 10_000):
    for c in (10.0, 1.0):
        plan = bounds.plan_thinning(n, m, c)
        if plan.is_thin:
            M = plan.k * plan.cap
            print(f"m={m:6d} c={c:4.1f}: k={plan.k:3d} cap={plan.cap:6d} deletes {plan.max_deletions:5d}"
                  f"  proof bound {bounds.proof_bound(M, plan.k):.4f}"
                  f"  headline bound {bounds.theorem_bound(n, m):.4f}")
        else:
            print(f"m={m:6d} c={c:4.1f}: keep everything")

# the shortfall lambda = sqrt(10 n ln n / k) makes a short bin an n^-5 event
k = 2
lam = math.sqrt(10 * n * math.log(n) / k)
print("Chernoff tail per bin:", bounds.chernoff_lower_tail(n / k, lam * k / n))
print("union over bins:", bounds.binning_failure_prob(n, k, lam))
print("DKW at eps = 0.01, n = 1e5:", bounds.dkw_tail(n, 0.01))
