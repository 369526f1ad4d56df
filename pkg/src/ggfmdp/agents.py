"""Tabular learning agents for the fair welfare objective.

Three families, each with a fairness-aware and a uniform-weight variant:
Q-learning on vector-valued Q tables, advantage actor-critic with a
softmax tabular policy, and clipped-surrogate policy optimization. The
fairness-aware variants weight per-objective advantages by the welfare
weights assigned according to the rank of the current objective estimates;
the uniform variants use constant weights 1/D (no sorting).
"""

from dataclasses import dataclass, field, replace

import numpy as np

from ._kernels import (
    collect_batch_kernel,
    ggf_greedy_kernel,
    q_train_kernel,
    softmax_row,
)
from .errors import EmptyBatch
from .ggf import GgfWeights
from .momdp import Momdp, StochasticPolicy
from .numkit import Rng

AGENT_IDS = ("ggf-ql", "ggf-a2c", "ggf-ppo", "mean-ql", "mean-a2c", "mean-ppo")


@dataclass
class TrainConfig:
    episodes: int = 2000
    horizon: int = 50
    gamma: float = 0.95
    lr_actor: float = 0.05
    lr_critic: float = 0.10
    lr_q: float = 0.10
    eps_start: float = 1.0
    eps_final: float = 0.05
    clip: float = 0.2  # PPO trust-region half-width
    lam: float = 0.95  # lambda-return parameter
    batch_episodes: int = 10
    ppo_epochs: int = 4
    seed: int = 0
    weights_id: str = "geo2"

    def __post_init__(self):
        if not 0 <= self.gamma < 1:
            raise ValueError("gamma must lie in [0, 1)")
        if not 0 < self.clip < 1:
            raise ValueError("clip must lie in (0, 1)")
        if not 0 <= self.lam <= 1:
            raise ValueError("lam must lie in [0, 1]")


@dataclass
class VectorQTable:
    """Q[s, a] is a vector with one component per objective."""

    Q: np.ndarray  # (S, A, D)

    @staticmethod
    def zeros(S, A, D):
        return VectorQTable(np.zeros((S, A, D)))


@dataclass
class SoftmaxPolicyParams:
    theta: np.ndarray  # (S, A) logits, temperature 1

    def policy(self) -> StochasticPolicy:
        z = self.theta - self.theta.max(axis=1, keepdims=True)
        e = np.exp(z)
        return StochasticPolicy(e / e.sum(axis=1, keepdims=True))


@dataclass
class CriticTable:
    V: np.ndarray  # (S, D)


@dataclass
class Batch:
    """One batch of sampled episodes (aligned (episode, step) arrays)."""

    states: np.ndarray  # (n, h)
    actions: np.ndarray  # (n, h)
    rewards: np.ndarray  # (n, h, D)
    behavior: np.ndarray  # (n, h) probability of the chosen action
    last_states: np.ndarray  # (n,)

    def __len__(self):
        return self.states.shape[0]


def ggf_greedy_action(qtable: VectorQTable, s: int, r, w: GgfWeights, gamma: float) -> int:
    """argmax_a GGF(w, r + gamma Q[s, a]); ties broken by lowest index."""
    return int(ggf_greedy_kernel(qtable.Q[s], np.asarray(r, dtype=np.float64), w.w, gamma))


def ggf_q_update(qtable: VectorQTable, transition, w: GgfWeights, gamma: float, alpha: float) -> VectorQTable:
    """One tabular backup toward r + gamma Q[s', a*], in place.

    a* re-selects greedily at s' with the sampled reward inside the argmax.
    """
    s, a, r, s2 = transition
    r = np.asarray(r, dtype=np.float64)
    a_star = ggf_greedy_kernel(qtable.Q[s2], r, w.w, gamma)
    qtable.Q[s, a] += alpha * (r + gamma * qtable.Q[s2, a_star] - qtable.Q[s, a])
    return qtable


def rank_weights(w: np.ndarray, J_hat: np.ndarray) -> np.ndarray:
    """Assign the k-th largest weight to the k-th smallest objective
    estimate; ties keep index order."""
    order = np.argsort(J_hat, kind="stable")
    out = np.empty_like(w)
    out[order] = w
    return out


def _uniform_weights(D: int) -> np.ndarray:
    return np.full(D, 1.0 / D)


def _effective_weights(w: GgfWeights, critic: CriticTable, batch: Batch, use_rank: bool) -> np.ndarray:
    if not use_rank:
        return _uniform_weights(critic.V.shape[1])
    J_hat = critic.V[batch.states[:, 0]].mean(axis=0)
    return rank_weights(w.w, J_hat)


def _returns_to_go(batch: Batch, critic: CriticTable, gamma: float) -> np.ndarray:
    """Discounted vector returns per step, bootstrapped with the critic at
    the state following the last step."""
    n, h = batch.states.shape
    D = batch.rewards.shape[2]
    G = np.empty((n, h, D))
    tail = critic.V[batch.last_states]
    for t in range(h - 1, -1, -1):
        tail = batch.rewards[:, t] + gamma * tail
        G[:, t] = tail
    return G


def _lambda_advantages(batch: Batch, critic: CriticTable, gamma: float, lam: float) -> np.ndarray:
    """Per-objective generalized advantage estimates (lambda-returns)."""
    n, h = batch.states.shape
    D = batch.rewards.shape[2]
    V = critic.V
    adv = np.zeros((n, h, D))
    carry = np.zeros((n, D))
    v_next = V[batch.last_states]
    for t in range(h - 1, -1, -1):
        delta = batch.rewards[:, t] + gamma * v_next - V[batch.states[:, t]]
        carry = delta + gamma * lam * carry
        adv[:, t] = carry
        v_next = V[batch.states[:, t]]
    return adv


def _visit_counts(s_flat, S):
    return np.maximum(np.bincount(s_flat, minlength=S), 1)


def _actor_ascent(params: SoftmaxPolicyParams, s_flat, a_flat, coef_flat):
    """theta[s] += coef * (onehot(a) - softmax(theta[s])), averaged over the
    batch visits to each state so the step size is visit-count invariant."""
    probs = _softmax(params.theta)[s_flat]
    grad = -probs
    grad[np.arange(s_flat.size), a_flat] += 1.0
    acc = np.zeros_like(params.theta)
    np.add.at(acc, s_flat, coef_flat[:, None] * grad)
    params.theta += acc / _visit_counts(s_flat, params.theta.shape[0])[:, None]


def _softmax(theta: np.ndarray) -> np.ndarray:
    z = theta - theta.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _critic_step(critic: CriticTable, s_flat, target_flat, lr: float):
    """Move each visited state's value toward the mean batch target."""
    err = target_flat - critic.V[s_flat]
    acc = np.zeros_like(critic.V)
    np.add.at(acc, s_flat, lr * err)
    critic.V += acc / _visit_counts(s_flat, critic.V.shape[0])[:, None]


def ggf_policy_gradient_step(
    params: SoftmaxPolicyParams,
    critic: CriticTable,
    batch: Batch,
    w: GgfWeights,
    config: TrainConfig,
    use_rank: bool = True,
    w_eff: np.ndarray = None,
):
    """One advantage-actor-critic update from a batch of trajectories."""
    if len(batch) == 0:
        raise EmptyBatch("policy gradient step needs at least one trajectory")
    if w_eff is None:
        w_eff = _effective_weights(w, critic, batch, use_rank)
    G = _returns_to_go(batch, critic, config.gamma)
    s_flat = batch.states.reshape(-1)
    a_flat = batch.actions.reshape(-1)
    adv = (G - critic.V[batch.states]).reshape(-1, G.shape[2])
    coef = config.lr_actor * (adv @ w_eff)
    _actor_ascent(params, s_flat, a_flat, coef)
    _critic_step(critic, s_flat, G.reshape(-1, G.shape[2]), config.lr_critic)
    return params


def ggf_ppo_step(
    params: SoftmaxPolicyParams,
    critic: CriticTable,
    batch: Batch,
    w: GgfWeights,
    config: TrainConfig,
    use_rank: bool = True,
    w_eff: np.ndarray = None,
    adv: np.ndarray = None,
    targets: np.ndarray = None,
):
    """One clipped-surrogate epoch over a batch.

    The per-step scalar advantage is the rank-weight combination of the
    per-objective lambda advantages; the clip is applied once to that
    combined scalar. `w_eff`, `adv` and `targets` can be precomputed by the
    trainer so that the rank assignment and advantages stay frozen across
    epochs of the same batch.
    """
    if len(batch) == 0:
        raise EmptyBatch("ppo step needs at least one trajectory")
    if w_eff is None:
        w_eff = _effective_weights(w, critic, batch, use_rank)
    if adv is None:
        adv = _lambda_advantages(batch, critic, config.gamma, config.lam)
    if targets is None:
        targets = adv + critic.V[batch.states]
    D = adv.shape[2]
    s_flat = batch.states.reshape(-1)
    a_flat = batch.actions.reshape(-1)
    a_bar = adv.reshape(-1, D) @ w_eff
    probs = _softmax(params.theta)[s_flat, a_flat]
    ratio = probs / batch.behavior.reshape(-1)
    # gradient of min(ratio * A, clip(ratio) * A): zero once the ratio has
    # moved past the clip boundary in the advantage's direction
    active = np.where(a_bar >= 0.0, ratio <= 1.0 + config.clip, ratio >= 1.0 - config.clip)
    coef = config.lr_actor * active * ratio * a_bar
    _actor_ascent(params, s_flat, a_flat, coef)
    _critic_step(critic, s_flat, targets.reshape(-1, D), config.lr_critic)
    return params


def scalarized_baseline_step(params, critic, batch, w, config, mode="a2c", **kw):
    """Identical machinery with fixed uniform weights (no sorting)."""
    step = ggf_policy_gradient_step if mode == "a2c" else ggf_ppo_step
    return step(params, critic, batch, w, config, use_rank=False, **kw)


@dataclass
class TrainResult:
    agent: str
    episode_returns: np.ndarray  # (episodes, D) undiscounted vector sums
    policy: StochasticPolicy
    qtable: VectorQTable = None
    params: SoftmaxPolicyParams = None
    critic: CriticTable = None


def _train_q(m: Momdp, w: GgfWeights, config: TrainConfig, use_rank: bool) -> TrainResult:
    S, A, D = m.num_states, m.num_actions, m.num_objectives
    w_vec = w.w if use_rank else _uniform_weights(D)
    Q = np.zeros((S, A, D))
    ep_returns = np.zeros((config.episodes, D))
    rng = Rng(config.seed)
    q_train_kernel(
        m.P, m.R, m.mu0, Q, w_vec, config.gamma, config.episodes, config.horizon,
        config.lr_q, config.eps_start, config.eps_final, rng.state, ep_returns,
    )
    zero = np.zeros(D)
    greedy = np.array([ggf_greedy_kernel(Q[s], zero, w_vec, 1.0) for s in range(S)])
    return TrainResult(
        agent="ggf-ql" if use_rank else "mean-ql",
        episode_returns=ep_returns,
        policy=StochasticPolicy.deterministic(greedy, A),
        qtable=VectorQTable(Q),
    )


def _train_pg(m: Momdp, w: GgfWeights, config: TrainConfig, use_rank: bool, ppo: bool) -> TrainResult:
    S, A, D = m.num_states, m.num_actions, m.num_objectives
    params = SoftmaxPolicyParams(np.zeros((S, A)))
    critic = CriticTable(np.zeros((S, D)))
    rng = Rng(config.seed)
    n_batches = max(config.episodes // config.batch_episodes, 1)
    returns = []
    for _ in range(n_batches):
        states, actions, rewards, behavior, last_states = collect_batch_kernel(
            m.P, m.R, m.mu0, params.theta, config.batch_episodes, config.horizon, rng.state
        )
        batch = Batch(states, actions, rewards, behavior, last_states)
        returns.append(rewards.sum(axis=1))
        w_eff = _effective_weights(w, critic, batch, use_rank)
        if ppo:
            adv = _lambda_advantages(batch, critic, config.gamma, config.lam)
            targets = adv + critic.V[batch.states]
            for _ in range(config.ppo_epochs):
                ggf_ppo_step(
                    params, critic, batch, w, config,
                    use_rank=use_rank, w_eff=w_eff, adv=adv, targets=targets,
                )
        else:
            ggf_policy_gradient_step(params, critic, batch, w, config, use_rank=use_rank, w_eff=w_eff)
    name = ("ggf-" if use_rank else "mean-") + ("ppo" if ppo else "a2c")
    return TrainResult(
        agent=name,
        episode_returns=np.concatenate(returns, axis=0),
        policy=params.policy(),
        params=params,
        critic=critic,
    )


def train(agent: str, m: Momdp, w: GgfWeights, config: TrainConfig) -> TrainResult:
    """Train one agent on one instance; fully deterministic in config.seed."""
    if agent not in AGENT_IDS:
        raise ValueError(f"unknown agent {agent!r}, expected one of {AGENT_IDS}")
    use_rank = agent.startswith("ggf-")
    kind = agent.split("-", 1)[1]
    cfg = replace(config, gamma=config.gamma)
    if kind == "ql":
        return _train_q(m, w, cfg, use_rank)
    return _train_pg(m, w, cfg, use_rank, ppo=kind == "ppo")
