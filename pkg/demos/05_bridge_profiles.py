"""Before/after empirical-process profiles for plotting.

Writes demos/out/before.csv and demos/out/after.csv with columns
i, position = i/n, deviation = sqrt(n) (x_(i) - i/n).

Run: python demos/05_bridge_profiles.py
"""
from pathlib import Path

from thinpoint import TrialConfig, emit_profiles, run_trial

cfg = TrialConfig(n=100_000, m=5000, c_lambda=1.0, master_seed=2024)
record, before, after = run_trial(cfg, 0, return_sets=True)
paths = emit_profiles(before, after, Path(__file__).parent / "out")
print(f"kept {record.n_kept} of {cfg.n} points ({record.n_kept / cfg.n:.1%})")
print(f"max |deviation|: {record.bridge_max_before:.3f} -> {record.bridge_max_after:.3f}")
print("wrote", *paths)
