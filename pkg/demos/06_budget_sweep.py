"""Monte Carlo sweep over deletion budgets.

Run: python demos/06_budget_sweep.py   (set THINPOINT_THREADS to parallelise)
"""
from thinpoint import TrialConfig, run_sweep

cfg = TrialConfig(n=100_000, m=0, c_lambda=1.0, master_seed=1)
result = run_sweep(cfg, trials=20, m_values=[0, 1000, 2000, 3500, 5000, 10_000])
print(f"{'m':>6} {'median D before':>16} {'median D after':>15} {'violations':>10}")
for row in result.summary()["per_m"]:
    print(f"{row['m']:6d} {row['disc_before']['median']:16.3e} "
          f"{row['disc_after']['median']:15.3e} {row['violation_rate']:10.2f}")
