"""Finite multiobjective MDP model, policies, and the instance file format.

Dimension order is normative everywhere: transitions are indexed
``P[action][state][next_state]`` and rewards ``R[action][state][objective]``.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from ._kernels import rollout_kernel
from .errors import InvariantViolation, ParseError, ShapeMismatch
from .numkit import Rng

_PROB_TOL = 1e-9


@dataclass(frozen=True)
class Momdp:
    """Finite MOMDP: P (A,S,S), R (A,S,D), initial distribution, discount."""

    P: np.ndarray
    R: np.ndarray
    mu0: np.ndarray
    gamma: float
    name: str = ""

    def __post_init__(self):
        P = np.ascontiguousarray(self.P, dtype=np.float64)
        R = np.ascontiguousarray(self.R, dtype=np.float64)
        mu0 = np.ascontiguousarray(self.mu0, dtype=np.float64)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "mu0", mu0)
        if P.ndim != 3 or P.shape[1] != P.shape[2]:
            raise InvariantViolation(f"P must have shape (A, S, S), got {P.shape}")
        A, S, _ = P.shape
        if R.ndim != 3 or R.shape[:2] != (A, S):
            raise InvariantViolation(f"R must have shape (A, S, D), got {R.shape}")
        if mu0.shape != (S,):
            raise InvariantViolation(f"mu0 must have length {S}, got {mu0.shape}")
        if not 0 <= self.gamma < 1:
            raise InvariantViolation(f"gamma must lie in [0, 1), got {self.gamma}")
        if not np.all(np.isfinite(R)):
            raise InvariantViolation("rewards must be finite")
        if np.any(P < 0):
            raise InvariantViolation("transition probabilities must be nonnegative")
        sums = P.sum(axis=2)
        bad = np.argwhere(np.abs(sums - 1.0) > _PROB_TOL)
        if bad.size:
            a, s = bad[0]
            raise InvariantViolation(f"P[{a}][{s}] sums to {sums[a, s]!r}")
        if np.any(mu0 < 0) or abs(mu0.sum() - 1.0) > _PROB_TOL:
            raise InvariantViolation(f"mu0 must be a distribution, sums to {mu0.sum()!r}")

    @property
    def num_actions(self) -> int:
        return self.P.shape[0]

    @property
    def num_states(self) -> int:
        return self.P.shape[1]

    @property
    def num_objectives(self) -> int:
        return self.R.shape[2]

    def with_gamma(self, gamma: float) -> "Momdp":
        return Momdp(self.P, self.R, self.mu0, gamma, self.name)


@dataclass(frozen=True)
class StochasticPolicy:
    """Stationary Markov policy: row-stochastic S x A matrix."""

    pi: np.ndarray

    def __post_init__(self):
        pi = np.ascontiguousarray(self.pi, dtype=np.float64)
        object.__setattr__(self, "pi", pi)
        if pi.ndim != 2:
            raise InvariantViolation(f"policy must be an S x A matrix, got shape {pi.shape}")
        if np.any(pi < 0) or np.any(np.abs(pi.sum(axis=1) - 1.0) > _PROB_TOL):
            raise InvariantViolation("policy rows must be distributions")

    @staticmethod
    def deterministic(actions, num_actions: int) -> "StochasticPolicy":
        actions = np.asarray(actions, dtype=np.int64)
        pi = np.zeros((actions.size, num_actions))
        pi[np.arange(actions.size), actions] = 1.0
        return StochasticPolicy(pi)

    @staticmethod
    def uniform(num_states: int, num_actions: int) -> "StochasticPolicy":
        return StochasticPolicy(np.full((num_states, num_actions), 1.0 / num_actions))


@dataclass(frozen=True)
class InducedChain:
    """Markov reward process induced by a policy: P_pi (S,S), R_pi (S,D)."""

    P_pi: np.ndarray
    R_pi: np.ndarray


@dataclass(frozen=True)
class Trajectory:
    """Sampled path: states has length horizon+1, actions/rewards horizon."""

    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    seed: int

    @property
    def horizon(self) -> int:
        return self.actions.size


def induce(m: Momdp, policy: StochasticPolicy) -> InducedChain:
    """Mix transition and reward tensors by the policy's action probabilities."""
    pi = policy.pi
    if pi.shape != (m.num_states, m.num_actions):
        raise ShapeMismatch(
            f"policy shape {pi.shape} does not match instance ({m.num_states}, {m.num_actions})"
        )
    # P_pi[s, s'] = sum_a pi[s, a] P[a, s, s']
    P_pi = np.einsum("sa,asr->sr", pi, m.P)
    R_pi = np.einsum("sa,asd->sd", pi, m.R)
    return InducedChain(P_pi, R_pi)


def rollout(m: Momdp, policy: StochasticPolicy, horizon: int, rng: Rng) -> Trajectory:
    """Simulate one trajectory; deterministic given the rng state."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    if policy.pi.shape != (m.num_states, m.num_actions):
        raise ShapeMismatch("policy shape does not match instance")
    states, actions, rewards = rollout_kernel(
        m.P, m.R, m.mu0, policy.pi, horizon, rng.state
    )
    return Trajectory(states, actions, rewards, seed=rng.seed)


def save_instance(m: Momdp, path) -> None:
    doc = {
        "name": m.name,
        "num_states": m.num_states,
        "num_actions": m.num_actions,
        "num_objectives": m.num_objectives,
        "gamma": m.gamma,
        "mu0": m.mu0.tolist(),
        "transitions": m.P.tolist(),
        "rewards": m.R.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_instance(path) -> Momdp:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    for key in ("num_states", "num_actions", "num_objectives", "gamma", "mu0", "transitions", "rewards"):
        if key not in doc:
            raise ParseError(f"{path}: missing field {key!r}")
    S, A, D = doc["num_states"], doc["num_actions"], doc["num_objectives"]
    P = np.asarray(doc["transitions"], dtype=np.float64)
    R = np.asarray(doc["rewards"], dtype=np.float64)
    if P.shape != (A, S, S):
        raise ParseError(f"{path}: transitions must have shape (A, S, S) = ({A}, {S}, {S}), got {P.shape}")
    if R.shape != (A, S, D):
        raise ParseError(f"{path}: rewards must have shape (A, S, D) = ({A}, {S}, {D}), got {R.shape}")
    return Momdp(P, R, np.asarray(doc["mu0"], dtype=np.float64), float(doc["gamma"]), doc.get("name", ""))
