"""Compare the compiled kernel path against the pure-numpy fallback.

Runs the same workloads in two subprocesses, one with GGFMDP_DISABLE_NUMBA=1,
and prints a timing table. Usage: python3 benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json
import time

import numpy as np

from ggfmdp import JIT_ENABLED
from ggfmdp.agents import TrainConfig, train
from ggfmdp.envs import species_lite
from ggfmdp.ggf import geometric_weights
from ggfmdp.momdp import StochasticPolicy, rollout
from ggfmdp.numkit import Rng

m = species_lite(5, 5)
w = geometric_weights(2.0, 2)
pol = StochasticPolicy.uniform(m.num_states, m.num_actions)

# warm-up triggers compilation so timings measure steady state
train("ggf-ql", m, w, TrainConfig(episodes=5, horizon=10, gamma=0.95, seed=0))
rollout(m, pol, 10, Rng(0))

timings = {}

t0 = time.perf_counter()
rng = Rng(1)
for _ in range(2000):
    rollout(m, pol, 100, rng)
timings["rollout (2000 x 100 steps)"] = time.perf_counter() - t0

t0 = time.perf_counter()
train("ggf-ql", m, w, TrainConfig(episodes=3000, horizon=50, gamma=0.95, seed=1))
timings["q-learning (3000 episodes)"] = time.perf_counter() - t0

t0 = time.perf_counter()
train("ggf-ppo", m, w, TrainConfig(episodes=3000, horizon=50, gamma=0.95, seed=1))
timings["ppo (3000 episodes)"] = time.perf_counter() - t0

print(json.dumps({"jit": JIT_ENABLED, "timings": timings}))
"""


def run(disable_jit: bool) -> dict:
    env = dict(os.environ, GGFMDP_DISABLE_NUMBA="1" if disable_jit else "")
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    jit = run(disable_jit=False)
    plain = run(disable_jit=True)
    assert jit["jit"] and not plain["jit"]
    name_w = max(len(k) for k in jit["timings"])
    print(f"{'workload':{name_w}s}  {'compiled':>10s}  {'numpy':>10s}  {'speedup':>8s}")
    for k in jit["timings"]:
        a, b = jit["timings"][k], plain["timings"][k]
        print(f"{k:{name_w}s}  {a:9.3f}s  {b:9.3f}s  {b / a:7.1f}x")


if __name__ == "__main__":
    main()
