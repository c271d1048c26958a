"""Acceptance criteria A1-A10, one test each, at their stated tolerances."""
import math
import time

import numpy as np
import pytest

from thinpoint.bounds import ThinningPlan, kolmogorov_sf, plan_thinning, proof_bound, theorem_bound
from thinpoint.discrepancy import ks_vs_cdf, star_discrepancy, star_discrepancy_bruteforce
from thinpoint.distributions import Exponential, Normal, transform_to_uniform
from thinpoint.harness import TrialConfig, run_sweep, run_trial
from thinpoint.pointset import from_unsorted, max_gap
from thinpoint.thinning import OnlineThinner, offline_keep_mask, thin_offline

N_DESK = 100_000


def test_a1_oracle_equivalence(criterion):
    rng = np.random.default_rng(1001)
    sets = [rng.random(int(rng.integers(1, 201))) for _ in range(1000)]
    sets += [[0.0], [1.0], [0.0, 1.0], [0.5, 0.5], [0.2, 0.2, 0.2, 0.9], [0.0, 0.0, 1.0, 1.0]]
    # duplicates drawn from a coarse grid
    sets += [rng.integers(0, 5, size=int(rng.integers(1, 40))) / 4 for _ in range(50)]
    start = time.perf_counter()
    worst = 0.0
    for s in sets:
        ps = from_unsorted(s)
        worst = max(worst, abs(star_discrepancy(ps) - star_discrepancy_bruteforce(ps)))
    elapsed = time.perf_counter() - start
    criterion("A1 oracle equivalence", worst <= 1e-12 and elapsed < 5.0,
              f"max |diff| = {worst:.2e} over {len(sets)} sets in {elapsed:.2f}s")


def _balanced_sample(rng, n, k, m):
    # per-bin counts cap + excess, excess summing to n - k*cap <= m; uniform inside each bin
    cap = math.ceil((n - m) / k)
    excess = rng.multinomial(n - k * cap, [1 / k] * k)
    counts = cap + excess
    pts = np.concatenate([(ell + rng.random(c)) / k for ell, c in enumerate(counts)])
    rng.shuffle(pts)
    return pts, cap


def test_a2_endpoint_exactness(criterion):
    rng = np.random.default_rng(2002)
    n, m = 10_000, 10
    start = time.perf_counter()
    failures = runs = 0
    while runs < 200:
        k = int(rng.integers(2, 9))
        pts, cap = _balanced_sample(rng, n, k, m)
        plan = ThinningPlan.manual(n, k, cap, m=m)
        kept, rep = thin_offline(from_unsorted(pts), plan, rng)
        assert not rep.deficient_bins
        runs += 1
        M = kept.n
        for ell in range(1, k + 1):
            below = int(np.sum(kept.values < ell / k)) if ell < k else M
            if k * below != ell * M:
                failures += 1
    elapsed = time.perf_counter() - start
    criterion("A2 endpoint exactness", failures == 0 and elapsed < 10.0,
              f"{runs} runs, {failures} endpoint mismatches, {elapsed:.2f}s")


def _adversarial(rng, n):
    kind = int(rng.integers(0, 7))
    if kind == 0:
        return rng.random(n)
    if kind == 1:  # everything in one narrow bin
        return rng.random(n) * 0.001
    if kind == 2:
        return np.zeros(n)
    if kind == 3:
        return np.ones(n)
    if kind == 4:  # left half only
        return rng.random(n) * 0.5
    if kind == 5:  # heavy duplicates
        return rng.integers(0, 3, size=n) / 2
    return rng.beta(0.3, 3.0, size=n)


def test_a3_hard_budget(criterion):
    rng = np.random.default_rng(3003)
    exceptions = thin_runs = online_runs = 0
    for run in range(10_000):
        n = int(rng.integers(2, 10_001))
        m = int(rng.integers(0, math.floor(0.1 * n) + 1))
        c = float(rng.choice([0.1, 0.5, 1.0, 10.0]))
        if run % 2:
            plan = plan_thinning(n, m, c)
        else:
            k = int(rng.integers(1, 30))
            cap = int(rng.integers(1, max(2, n // k + 2)))
            plan = ThinningPlan.manual(n, k, cap, m=max(m, max(0, n - k * cap)))
        pts = _adversarial(rng, n)
        ps = from_unsorted(pts)
        _, rep = thin_offline(ps, plan, rng)
        thin_runs += plan.is_thin
        if rep.n_in - rep.n_kept > plan.m:
            exceptions += 1
        if run % 20 == 0:
            _, orep = OnlineThinner(plan).run(pts)
            online_runs += 1
            if orep.n_in - orep.n_kept > plan.m:
                exceptions += 1
    criterion("A3 hard budget", exceptions == 0,
              f"10000 offline runs ({thin_runs} thinning), {online_runs} online, {exceptions} over budget")


def test_a4_theorem_bound_desk_scale(criterion):
    res = run_sweep(TrialConfig(n=N_DESK, m=5000, c_lambda=10.0, master_seed=4004), 200)
    recs = res.records
    within_proof = np.mean([r.disc_after <= r.proof_bound_value for r in recs])
    within_thm = np.mean([r.disc_after <= theorem_bound(N_DESK, 5000) for r in recs])
    assert all(r.proof_bound_value == proof_bound(r.n_kept, 2) for r in recs)
    criterion("A4 theorem bound at desk scale", within_proof >= 0.99 and within_thm == 1.0,
              f"<= proof bound in {within_proof:.3f}, <= 0.2303 in {within_thm:.3f} of 200 trials")


def test_a5_no_deletion_regime(criterion):
    n, m = N_DESK, 1000
    assert m < math.sqrt(10 * n * math.log(n))
    plan = plan_thinning(n, m)
    rng = np.random.default_rng(5005)
    same = 0
    for _ in range(20):
        pts = rng.random(n)
        ps = from_unsorted(pts)
        kept, _ = thin_offline(ps, plan, rng)
        okept, _ = OnlineThinner(plan).run(pts)
        same += (kept == ps) and (okept == ps)
    criterion("A5 no-deletion regime", same == 20 and not plan.is_thin,
              f"output equals input in {same}/20 runs (offline and online)")


def test_a6_figure_one(criterion):
    res = run_sweep(TrialConfig(n=N_DESK, m=5000, c_lambda=1.0, master_seed=6006), 100)
    recs = res.records
    med_before = np.median([r.disc_before for r in recs])
    med_after = np.median([r.disc_after for r in recs])
    decreased = np.mean([r.bridge_max_after < r.bridge_max_before for r in recs])
    ok = med_after <= 0.5 * med_before and decreased >= 0.95
    criterion("A6 figure-1 reproduction", ok,
              f"median after/before = {med_after / med_before:.3f}, bridge max decreased in {decreased:.2f}")


def test_a7_limit_law(criterion):
    rng = np.random.default_rng(7007)
    start = time.perf_counter()
    scaled = [math.sqrt(N_DESK) * star_discrepancy(from_unsorted(rng.random(N_DESK)))
              for _ in range(500)]
    dist = ks_vs_cdf(scaled, lambda z: np.array([1.0 - kolmogorov_sf(float(v)) for v in np.atleast_1d(z)]))
    elapsed = time.perf_counter() - start
    criterion("A7 limit law", dist <= 0.1 and elapsed < 180,
              f"KS distance to Kolmogorov law = {dist:.4f} over 500 trials, {elapsed:.1f}s")


def test_a8_max_gap_order(criterion):
    rng = np.random.default_rng(8008)
    gaps = [max_gap(from_unsorted(rng.random(N_DESK))) for _ in range(100)]
    target = (math.log(N_DESK) + 0.5772) / N_DESK
    ratio = float(np.mean(gaps)) / target
    criterion("A8 max-gap order", abs(ratio - 1) <= 0.2, f"mean / ((ln n + 0.5772)/n) = {ratio:.3f}")


def test_a9_online_offline_equivalence(criterion):
    rng = np.random.default_rng(9009)
    mismatches = 0
    for _ in range(500):
        n = int(rng.integers(2_000, 20_001))
        c = float(rng.choice([1.0, 3.0, 10.0]))
        m = int(rng.integers(0, math.floor(0.1 * n) + 1))
        plan = plan_thinning(n, m, c)
        pts = rng.random(n)
        _, rep = thin_offline(from_unsorted(pts), plan, rng)
        _, orep = OnlineThinner(plan).run(pts)
        mismatches += rep.per_bin_kept != orep.per_bin_kept
    criterion("A9 online/offline equivalence", mismatches == 0,
              f"{mismatches} per-bin mismatches over 500 multisets")


@pytest.mark.parametrize("spec", [Normal(1.0, 2.0), Exponential(0.5)], ids=str)
def test_a10_corollary(criterion, spec):
    rng = np.random.default_rng(10010)
    worst = 0.0
    for size in (1, 2, 10, 100, 1000, 10_000):
        x = spec.sample(size, rng)
        worst = max(worst, abs(ks_vs_cdf(x, spec.cdf) - star_discrepancy(transform_to_uniform(x, spec))))

    n, m, trials = N_DESK, 5000, 50
    plan = plan_thinning(n, m)
    ok_proof = ok_thm = 0
    for _ in range(trials):
        x = np.sort(spec.sample(n, rng))
        ps = transform_to_uniform(x, spec)
        keep, _, _ = offline_keep_mask(ps, plan, rng)
        kept_raw = x[keep]
        assert n - kept_raw.size <= m
        back = ks_vs_cdf(kept_raw, spec.cdf)
        ok_proof += back <= proof_bound(kept_raw.size, plan.k)
        ok_thm += back <= theorem_bound(n, m)
    ok = worst <= 1e-12 and ok_proof / trials >= 0.99 and ok_thm == trials
    criterion(f"A10 corollary identity [{spec}]", ok,
              f"identity max |diff| = {worst:.1e}; bound held in {ok_proof}/{trials} (proof), "
              f"{ok_thm}/{trials} (theorem)")
