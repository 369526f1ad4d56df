"""Experiment orchestration: seeded training runs, test rollouts, welfare
metrics, and deterministic CSV emission.

All floats written to CSV use the shortest round-trip decimal (`repr`),
so identical configs yield byte-identical files, serially or in parallel.
"""

import dataclasses
import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .agents import AGENT_IDS, TrainConfig, train
from .envs import env_from_id
from .errors import EmptyBatch, ZeroMean
from .ggf import GgfWeights, ggf, weights_from_name
from .momdp import Momdp, StochasticPolicy, rollout
from .numkit import Rng

DEFAULT_ROLLOUTS = 50
TEST_STREAM = 0x7E57  # rng stream id for the test phase


@dataclass
class ExperimentConfig:
    env: str
    agent: str
    weights: str
    train: TrainConfig = field(default_factory=TrainConfig)
    rollouts: int = DEFAULT_ROLLOUTS
    seeds: tuple = (0,)
    outdir: str = None
    discounted_test: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.rollouts < 1:
            raise ValueError("rollouts must be >= 1")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be distinct")
        if self.agent not in AGENT_IDS:
            raise ValueError(f"unknown agent {self.agent!r}")

    def to_json(self) -> str:
        d = dataclasses.asdict(self)
        d["seeds"] = list(self.seeds)
        return json.dumps(d, sort_keys=True, indent=2)

    def hash(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()[:16]


@dataclass
class RunRecord:
    config_hash: str
    seed: int
    train_returns: np.ndarray  # (episodes, D)
    test_returns: np.ndarray  # (rollouts, D)
    metrics: dict
    error: str = None


def ggf_score(test_returns, w: GgfWeights) -> float:
    """GGF of the componentwise mean return vector (mean first, GGF second)."""
    arr = np.asarray(test_returns, dtype=np.float64)
    if arr.size == 0:
        raise EmptyBatch("ggf_score needs at least one rollout")
    return float(ggf(w, arr.mean(axis=0)))


def cv(values) -> float:
    """Population std / mean of the components of one D-vector."""
    v = np.asarray(values, dtype=np.float64)
    m = v.mean()
    if m == 0.0:
        raise ZeroMean("coefficient of variation undefined for zero mean")
    return float(v.std() / m)


def compute_metrics(test_returns, w: GgfWeights) -> dict:
    avg = np.asarray(test_returns, dtype=np.float64).mean(axis=0)
    return {
        "ggf_score": ggf_score(test_returns, w),
        "cv": cv(avg),
        "min": float(avg.min()),
        "max": float(avg.max()),
        "mean": float(avg.mean()),
    }


def test_rollouts(m: Momdp, policy: StochasticPolicy, seed: int, n: int, horizon: int,
                  discounted: bool = False) -> np.ndarray:
    """Apply a fixed policy n times; one return vector per rollout.

    Undiscounted returns are per-step averages (sum / horizon); discounted
    returns are plain discounted sums.
    """
    rng = Rng(seed).spawn(TEST_STREAM)
    out = np.empty((n, m.num_objectives))
    disc = m.gamma ** np.arange(horizon)
    for k in range(n):
        traj = rollout(m, policy, horizon, rng)
        if discounted:
            out[k] = disc @ traj.rewards
        else:
            out[k] = traj.rewards.sum(axis=0) / horizon
    return out


def run_one_seed(cfg: ExperimentConfig, seed: int) -> RunRecord:
    m = env_from_id(cfg.env)
    w = weights_from_name(cfg.weights, m.num_objectives)
    tc = dataclasses.replace(cfg.train, seed=seed, weights_id=cfg.weights)
    try:
        result = train(cfg.agent, m, w, tc)
        test = test_rollouts(m, result.policy, seed, cfg.rollouts, tc.horizon,
                             discounted=cfg.discounted_test)
        return RunRecord(cfg.hash(), seed, result.episode_returns, test,
                         compute_metrics(test, w))
    except Exception as exc:  # record and let the other seeds continue
        return RunRecord(cfg.hash(), seed, None, None, {}, error=f"{type(exc).__name__}: {exc}")


def _fmt(x) -> str:
    return repr(float(x))


def write_csvs(cfg: ExperimentConfig, records, outdir: str):
    os.makedirs(outdir, exist_ok=True)
    D = None
    for r in records:
        if r.test_returns is not None:
            D = r.test_returns.shape[1]
            break
    if D is None:
        raise RuntimeError("all seeds failed: " + "; ".join(r.error or "" for r in records))
    runs_path = os.path.join(outdir, "runs.csv")
    with open(runs_path + ".tmp", "w") as f:
        f.write("seed,rollout," + ",".join(f"obj_{d}" for d in range(D)) + "\n")
        for r in records:
            if r.test_returns is None:
                continue
            for k, vec in enumerate(r.test_returns):
                f.write(f"{r.seed},{k}," + ",".join(_fmt(x) for x in vec) + "\n")
    os.replace(runs_path + ".tmp", runs_path)
    summary_path = os.path.join(outdir, "summary.csv")
    with open(summary_path + ".tmp", "w") as f:
        f.write("seed,ggf_score,cv,min,max,mean\n")
        for r in records:
            if r.test_returns is None:
                continue
            mt = r.metrics
            f.write(f"{r.seed}," + ",".join(
                _fmt(mt[k]) for k in ("ggf_score", "cv", "min", "max", "mean")) + "\n")
    os.replace(summary_path + ".tmp", summary_path)
    with open(os.path.join(outdir, "config.json"), "w") as f:
        f.write(cfg.to_json() + "\n")


def run_experiment(cfg: ExperimentConfig):
    """One record per seed, in seed order; CSVs written if cfg.outdir set."""
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(lambda s: run_one_seed(cfg, s), cfg.seeds))
    else:
        records = [run_one_seed(cfg, s) for s in cfg.seeds]
    failed = [r for r in records if r.error]
    if failed:
        import warnings

        warnings.warn(f"{len(failed)} of {len(records)} seeds failed; partial results")
    if cfg.outdir:
        write_csvs(cfg, records, cfg.outdir)
    return records
