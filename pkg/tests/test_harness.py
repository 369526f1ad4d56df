"""Harness metrics and experiment orchestration."""

import numpy as np
import pytest

from ggfmdp.agents import TrainConfig
from ggfmdp.errors import EmptyBatch, ZeroMean
from ggfmdp.ggf import geometric_weights, make_weights
from ggfmdp.harness import ExperimentConfig, compute_metrics, cv, ggf_score, run_experiment


class TestGgfScore:
    def test_single_rollout(self):
        w = make_weights("custom", 2, raw=np.array([2 / 3, 1 / 3]))
        assert ggf_score([np.array([3.0, 9.0])], w) == pytest.approx(5.0)

    def test_mean_before_ggf(self):
        # averaging first gives ggf(5,5) = 5, not the mean of GGFs (10/3)
        w = make_weights("custom", 2, raw=np.array([2 / 3, 1 / 3]))
        rollouts = [np.array([10.0, 0.0]), np.array([0.0, 10.0])]
        assert ggf_score(rollouts, w) == pytest.approx(5.0)

    def test_constant_rollouts(self):
        w = geometric_weights(2.0, 3)
        v = np.array([1.0, 4.0, 2.0])
        from ggfmdp.ggf import ggf

        assert ggf_score([v] * 7, w) == pytest.approx(ggf(w, v))

    def test_empty(self):
        with pytest.raises(EmptyBatch):
            ggf_score([], geometric_weights(2.0, 2))


class TestCv:
    def test_equal_components_zero(self):
        assert cv(np.array([5.0, 5.0])) == 0.0

    def test_known_value(self):
        assert cv(np.array([2.0, 4.0])) == pytest.approx(1 / 3)

    def test_zero_mean(self):
        with pytest.raises(ZeroMean):
            cv(np.array([0.0, 0.0]))


def small_cfg(**kw):
    base = dict(
        env="one_state",
        agent="ggf-a2c",
        weights="geo2",
        train=TrainConfig(episodes=100, horizon=10, gamma=0.9),
        rollouts=5,
        seeds=(1, 2),
    )
    base.update(kw)
    return ExperimentConfig(**base)


class TestRunExperiment:
    def test_one_record_per_seed_in_order(self):
        recs = run_experiment(small_cfg())
        assert [r.seed for r in recs] == [1, 2]
        for r in recs:
            assert r.test_returns.shape == (5, 2)
            assert set(r.metrics) == {"ggf_score", "cv", "min", "max", "mean"}

    def test_metrics_recomputable(self):
        recs = run_experiment(small_cfg())
        w = geometric_weights(2.0, 2)
        for r in recs:
            assert r.metrics == compute_metrics(r.test_returns, w)

    def test_byte_identical_csvs_serial_vs_parallel(self, tmp_path):
        d1, d2 = tmp_path / "a", tmp_path / "b"
        run_experiment(small_cfg(seeds=(1, 2, 3, 4), outdir=str(d1)))
        run_experiment(small_cfg(seeds=(1, 2, 3, 4), outdir=str(d2), workers=4))
        assert (d1 / "runs.csv").read_bytes() == (d2 / "runs.csv").read_bytes()
        assert (d1 / "summary.csv").read_bytes() == (d2 / "summary.csv").read_bytes()

    def test_summary_round_trips_from_runs_csv(self, tmp_path):
        from ggfmdp.harness import _fmt

        run_experiment(small_cfg(seeds=(1, 2), outdir=str(tmp_path)))
        rows = (tmp_path / "runs.csv").read_text().strip().split("\n")[1:]
        per_seed = {}
        for row in rows:
            parts = row.split(",")
            per_seed.setdefault(int(parts[0]), []).append([float(x) for x in parts[2:]])
        w = geometric_weights(2.0, 2)
        recomputed = []
        for seed in sorted(per_seed):
            mt = compute_metrics(np.array(per_seed[seed]), w)
            recomputed.append(
                f"{seed}," + ",".join(_fmt(mt[k]) for k in ("ggf_score", "cv", "min", "max", "mean"))
            )
        stored = (tmp_path / "summary.csv").read_text().strip().split("\n")[1:]
        assert recomputed == stored

    def test_single_rollout_summary(self):
        recs = run_experiment(small_cfg(rollouts=1))
        for r in recs:
            assert r.metrics == compute_metrics(r.test_returns, geometric_weights(2.0, 2))
            assert r.test_returns.shape[0] == 1

    def test_invalid_config(self):
        with pytest.raises(ValueError):
            small_cfg(seeds=(1, 1))
        with pytest.raises(ValueError):
            small_cfg(rollouts=0)
        with pytest.raises(ValueError):
            small_cfg(agent="nope")
