import json

import numpy as np
import pytest

from thinpoint.bounds import plan_thinning
from thinpoint.distributions import Exponential
from thinpoint.harness import (
    PRESETS,
    SweepResult,
    TrialConfig,
    derive_seed,
    emit_profiles,
    run_sweep,
    run_trial,
    splitmix64,
)
from thinpoint.pointset import DomainError, from_unsorted


def test_splitmix64_reference_values():
    # published SplitMix64 outputs for state 0: the generator adds the
    # increment before mixing, matching splitmix64(0), splitmix64(gamma), ...
    gamma = 0x9E3779B97F4A7C15
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    assert splitmix64(gamma) == 0x6E789E6AA1B965F4
    assert splitmix64(2 * gamma & ((1 << 64) - 1)) == 0x06C45D188009454F


def test_seed_derivation_injective():
    seeds = {derive_seed(12345, i) for i in range(20_000)}
    assert len(seeds) == 20_000
    assert derive_seed(7, 3) == splitmix64(7 ^ 3)


def test_presets():
    assert PRESETS == {"paper-safe": 10.0, "figure-1": 1.0}


def test_trial_config_validation():
    with pytest.raises(DomainError):
        TrialConfig(n=1, m=0)
    with pytest.raises(DomainError):
        TrialConfig(n=100, m=0, mode="batch")
    with pytest.raises(DomainError):
        TrialConfig(n=100, m=0, master_seed=-1)


def test_run_trial_paper_scale():
    cfg = TrialConfig(n=100_000, m=5000, master_seed=1)
    r = run_trial(cfg, 0)
    assert r.deletions <= 5000
    assert r.k == 2 and r.regime == "Thin"
    assert r.disc_after <= r.proof_bound_value
    assert r.theorem_bound_value == pytest.approx(0.2302585, rel=1e-6)
    assert run_trial(cfg, 0) == r


def test_run_trial_no_deletion():
    r = run_trial(TrialConfig(n=100_000, m=1000, master_seed=2), 5)
    assert r.deletions == 0 and r.disc_after == r.disc_before and r.regime == "NoDeletion"


def test_run_trial_online_and_distribution():
    cfg = TrialConfig(n=20_000, m=2000, c_lambda=1.0, distribution=Exponential(3), master_seed=4,
                      mode="online")
    r = run_trial(cfg, 0)
    plan = plan_thinning(20_000, 2000, 1.0)
    assert r.deletions <= 2000
    if r.deficient_count == 0:
        assert r.n_kept == plan.k * plan.cap


def test_sweep_records_and_summary():
    cfg = TrialConfig(n=20_000, m=0, c_lambda=1.0, master_seed=9)
    res = run_sweep(cfg, 5, [0, 500, 2000])
    assert len(res.records) == 15
    assert [r.trial_index for r in res.records] == list(range(15))
    for r in res.records:
        assert r.deletions <= r.m
        if r.m < 500:
            assert r.deletions == 0
    summary = res.summary()
    assert [s["m"] for s in summary["per_m"]] == [0, 500, 2000]
    rec2000 = [r.disc_after for r in res.records if r.m == 2000]
    assert summary["per_m"][2]["disc_after"]["median"] == pytest.approx(np.median(rec2000))
    assert 0.0 <= summary["violation_rate"] <= 1.0


def test_sweep_single_trial_wraps_run_trial():
    cfg = TrialConfig(n=5000, m=400, c_lambda=1.0, master_seed=3)
    res = run_sweep(cfg, 1)
    assert res.records == [run_trial(cfg, 0)]


def test_sweep_parallel_matches_serial(monkeypatch):
    cfg = TrialConfig(n=10_000, m=0, c_lambda=1.0, master_seed=5)
    serial = run_sweep(cfg, 4, [0, 1000], workers=1)
    monkeypatch.setenv("THINPOINT_THREADS", "4")
    parallel = run_sweep(cfg, 4, [0, 1000])
    assert serial.to_json() == parallel.to_json()


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv("THINPOINT_THREADS", "zero")
    with pytest.raises(DomainError):
        run_sweep(TrialConfig(n=1000, m=0), 1)


def test_sweep_rejects_over_budget():
    with pytest.raises(DomainError):
        run_sweep(TrialConfig(n=1000, m=0), 2, [50, 500])


def test_sweep_json_schema(tmp_path):
    cfg = TrialConfig(n=5000, m=0, c_lambda=1.0, master_seed=1)
    res = run_sweep(cfg, 2, [0, 400])
    path = tmp_path / "s.json"
    res.write_json(path)
    doc = json.loads(path.read_text())
    assert set(doc) == {"config", "records", "summary"}
    assert doc["config"]["m_values"] == [0, 400]
    rec = doc["records"][3]
    for key in ("trial_index", "seed_used", "disc_before", "disc_after", "n_kept", "deletions",
                "deficient_count", "theorem_bound_value", "proof_bound_value"):
        assert key in rec
    assert rec["disc_after"] == res.records[3].disc_after
    assert isinstance(res, SweepResult)


def test_sweep_csv(tmp_path):
    res = run_sweep(TrialConfig(n=5000, m=400, c_lambda=1.0, master_seed=1), 3)
    path = tmp_path / "s.csv"
    res.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("trial_index,seed_used,m,")
    assert len(lines) == 4


def test_emit_profiles(tmp_path):
    ps = from_unsorted([0.5])
    b, a = emit_profiles(ps, ps, tmp_path / "prof")
    assert b.read_text() == a.read_text()
    assert b.read_text().splitlines() == ["i,position,deviation", "1,1,-0.5"]
    with pytest.raises(DomainError):
        emit_profiles(ps, from_unsorted([]), tmp_path / "x")


def test_emit_profiles_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OSError, match="file"):
        emit_profiles(from_unsorted([0.1]), from_unsorted([0.2]), blocker / "sub")


def test_median_after_decreases_with_budget():
    cfg = TrialConfig(n=50_000, m=0, c_lambda=1.0, master_seed=21)
    m_values = [0, 1500, 2500, 3500, 5000]
    res = run_sweep(cfg, 30, m_values)
    meds = [s["disc_after"]["median"] for s in res.summary()["per_m"]]
    inversions = sum(a < b for a, b in zip(meds, meds[1:]))
    assert inversions <= 1
