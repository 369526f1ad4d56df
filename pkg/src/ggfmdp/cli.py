"""Command-line interface.

Subcommands: solve, evaluate, train, bounds, demo-inconsistency,
gen-instance. Exit codes: 0 success, 2 usage error, 1 runtime error.
"""

import argparse
import json
import os
import sys

import numpy as np

from .agents import AGENT_IDS, TrainConfig, train
from .bounds import BoundReport, theorem6_report
from .envs import env_from_id, example1
from .errors import GgfMdpError
from .exact import evaluate
from .ggf import ggf, weights_from_name
from .harness import _fmt
from .momdp import Momdp, StochasticPolicy, load_instance, save_instance
from .optimal import AVERAGE, DISCOUNTED, solve_ggf_average, solve_ggf_discounted


def _load_env(args) -> Momdp:
    if getattr(args, "instance", None):
        return load_instance(args.instance)
    return env_from_id(args.env)


def _add_instance_args(p, require=True):
    g = p.add_mutually_exclusive_group(required=require)
    g.add_argument("--instance", help="instance JSON file")
    g.add_argument("--env", help="builtin environment id (e.g. one_state, species:5x5)")


def cmd_solve(args) -> int:
    m = _load_env(args)
    w = weights_from_name(args.weights, m.num_objectives)
    solver = solve_ggf_discounted if args.criterion == DISCOUNTED else solve_ggf_average
    sol = solver(m, w)
    report = {
        "criterion": sol.criterion,
        "ggf_value": sol.ggf_value,
        "J": sol.J.tolist(),
        "policy": sol.policy.pi.tolist(),
    }
    print(json.dumps(report, indent=2))
    return 0


def cmd_evaluate(args) -> int:
    m = _load_env(args)
    if args.policy:
        with open(args.policy) as f:
            policy = StochasticPolicy(np.array(json.load(f)["policy"]))
    else:
        policy = StochasticPolicy.uniform(m.num_states, m.num_actions)
    ev = evaluate(m, policy)
    report = {
        "V": ev.V.tolist(),
        "gain": ev.g.tolist(),
        "occupation_discounted": ev.x_gamma.tolist(),
        "occupation_stationary": ev.x_stat.tolist(),
        "sigma_H": ev.sigma_H,
    }
    print(json.dumps(report, indent=2))
    return 0


def cmd_train(args) -> int:
    m = env_from_id(args.env)
    w = weights_from_name(args.weights, m.num_objectives)
    cfg_kw = {}
    if args.config:
        with open(args.config) as f:
            cfg_kw = json.load(f)
    cfg_kw["seed"] = args.seed
    cfg_kw["weights_id"] = args.weights
    cfg = TrainConfig(**cfg_kw)
    result = train(args.agent, m, w, cfg)
    os.makedirs(args.out, exist_ok=True)
    D = m.num_objectives
    csv_path = os.path.join(args.out, "episodes.csv")
    with open(csv_path, "w") as f:
        f.write("episode," + ",".join(f"obj_{d}" for d in range(D)) + ",ggf_running\n")
        running = np.zeros(D)
        for i, vec in enumerate(result.episode_returns):
            running += (vec - running) / (i + 1)
            f.write(f"{i}," + ",".join(_fmt(x) for x in vec) + f",{_fmt(ggf(w, running))}\n")
    with open(os.path.join(args.out, "policy.json"), "w") as f:
        json.dump({"agent": args.agent, "env": args.env, "seed": args.seed,
                   "policy": result.policy.pi.tolist()}, f, indent=2)
    print(f"wrote {csv_path} and policy.json")
    return 0


def cmd_bounds(args) -> int:
    m = _load_env(args)
    w = weights_from_name(args.weights, m.num_objectives)
    gammas = [float(g) for g in args.gammas.split(",")]
    print(BoundReport.CSV_COLUMNS)
    for g in gammas:
        rep = theorem6_report(m.with_gamma(g), w, g)
        print(rep.csv_row())
    return 0


def cmd_demo_inconsistency(args) -> int:
    """Enumerate the four deterministic plans of the three-state example and
    show the welfare each earns from both start states, for two weight
    vectors. With weights (0.8, 0.2) the plan that is optimal from the first
    state prescribes an action at the second state that is strictly dominated
    when the process starts there."""
    gamma = 0.7
    names = {0: "up", 1: "down"}
    wsets = {"(0.8, 0.2)": np.array([0.8, 0.2]), "(5/9, 4/9)": np.array([5 / 9, 4 / 9])}
    plans = [(a1, a2) for a1 in (0, 1) for a2 in (0, 1)]
    values = {}
    for start in (0, 1):
        m = example1(gamma, start=start)
        for a1, a2 in plans:
            pol = StochasticPolicy.deterministic(np.array([a1, a2, 0]), 2)
            V = evaluate(m, pol).V
            v = m.mu0 @ V
            if start == 1:
                v = gamma * v  # undo the stage-2 clock factor for display
            values[(start, a1, a2)] = v
    for label, w in wsets.items():
        w = w / w.sum()
        print(f"weights {label}:")
        print(f"  {'plan':14s} {'value from s1':>16s} {'ggf@s1':>8s} {'value from s2':>16s} {'ggf@s2':>8s}")
        best1 = max(plans, key=lambda p: ggf_sorted(w, values[(0, *p)]))
        best2 = max(plans, key=lambda p: ggf_sorted(w, values[(1, *p)]))
        for a1, a2 in plans:
            v1, v2 = values[(0, a1, a2)], values[(1, a1, a2)]
            mark1 = " * s1-optimal" if (a1, a2) == best1 else ""
            mark2 = " (s2-optimal)" if (a1, a2) == best2 else ""
            print(f"  {names[a1]:4s}/{names[a2]:8s} ({v1[0]:5.1f},{v1[1]:5.1f})    "
                  f"{ggf_sorted(w, v1):8.3f} ({v2[0]:5.1f},{v2[1]:5.1f})    "
                  f"{ggf_sorted(w, v2):8.3f}{mark1}{mark2}")
        consistent = best1[1] == best2[1]
        print(f"  s1-optimal plan takes '{names[best1[1]]}' at s2; "
              f"from s2 the optimal action is '{names[best2[1]]}'"
              f" -> {'consistent' if consistent else 'INCONSISTENT'}")
        print()
    print("note: with weights (5/9, 4/9) the enumeration is consistent; the "
          "inconsistency appears with (0.8, 0.2).")
    return 0


def ggf_sorted(w, v):
    return float(np.sort(w)[::-1] @ np.sort(v))


def cmd_gen_instance(args) -> int:
    m = env_from_id(args.env)
    save_instance(m, args.out)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ggfmdp", description="fair multiobjective MDP toolkit")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("solve", help="LP-optimal fair policy for an instance")
    _add_instance_args(s)
    s.add_argument("--weights", default="geo2")
    s.add_argument("--criterion", choices=[DISCOUNTED, AVERAGE], default=DISCOUNTED)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("evaluate", help="exact evaluation of a policy")
    _add_instance_args(s)
    s.add_argument("--policy", help="policy JSON (default: uniform)")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("train", help="train a tabular agent")
    s.add_argument("--agent", choices=AGENT_IDS, required=True)
    s.add_argument("--env", required=True)
    s.add_argument("--weights", default="geo2")
    s.add_argument("--config", help="TrainConfig overrides as JSON")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="train_out")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("bounds", help="discount-vs-average welfare bound report")
    _add_instance_args(s)
    s.add_argument("--weights", default="geo2")
    s.add_argument("--gammas", default="0.9,0.99,0.999")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("demo-inconsistency", help="state-dependent optimality demo")
    s.set_defaults(func=cmd_demo_inconsistency)

    s = sub.add_parser("gen-instance", help="emit a builtin environment as JSON")
    s.add_argument("--env", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gen_instance)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if e.code is not None else 0
    try:
        return args.func(args)
    except (GgfMdpError, OSError, ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
