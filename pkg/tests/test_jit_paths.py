"""The compiled and pure-numpy kernel paths must produce identical results.

The JIT switch is read at import time, so the fallback path runs in a
subprocess with GGFMDP_DISABLE_NUMBA=1.
"""

import json
import os
import subprocess
import sys

SCRIPT = r"""
import json
import numpy as np
from ggfmdp import JIT_ENABLED
from ggfmdp.agents import TrainConfig, train
from ggfmdp.envs import one_state, garnet
from ggfmdp.momdp import StochasticPolicy, rollout
from ggfmdp.numkit import Rng

rng = Rng(123)
floats = [rng.next_float() for _ in range(5)]
m = garnet(6, 3, 2, branching=3, seed=9)
traj = rollout(m, StochasticPolicy.uniform(6, 3), 30, Rng(4))
from ggfmdp import geometric_weights
res = train("ggf-ql", one_state(), geometric_weights(2.0, 2),
            TrainConfig(episodes=100, horizon=10, gamma=0.9, seed=1))
print(json.dumps({
    "jit": JIT_ENABLED,
    "floats": floats,
    "states": traj.states.tolist(),
    "rewards_sum": traj.rewards.sum(axis=0).tolist(),
    "q": res.qtable.Q.tolist(),
    "policy": res.policy.pi.tolist(),
}))
"""


def run_path(disable: bool):
    env = dict(os.environ)
    env["GGFMDP_DISABLE_NUMBA"] = "1" if disable else ""
    out = subprocess.run([sys.executable, "-c", SCRIPT], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_fallback_path_matches_jit_path_bitwise():
    jit = run_path(disable=False)
    plain = run_path(disable=True)
    assert jit["jit"] is True
    assert plain["jit"] is False
    assert jit["floats"] == plain["floats"]
    assert jit["states"] == plain["states"]
    assert jit["rewards_sum"] == plain["rewards_sum"]
    assert jit["q"] == plain["q"]
    assert jit["policy"] == plain["policy"]
