"""Tabular agent unit tests: update rules, rank weighting, clipped
surrogate mechanics, single-objective reductions, and convergence smoke
checks on the one-state instance."""

import numpy as np
import pytest

from ggfmdp.agents import (
    Batch,
    CriticTable,
    SoftmaxPolicyParams,
    TrainConfig,
    VectorQTable,
    ggf_greedy_action,
    ggf_policy_gradient_step,
    ggf_ppo_step,
    ggf_q_update,
    rank_weights,
    train,
)
from ggfmdp.envs import one_state
from ggfmdp.errors import EmptyBatch
from ggfmdp.exact import evaluate
from ggfmdp.ggf import geometric_weights, ggf, make_weights
from ggfmdp.momdp import Momdp


class TestQOps:
    def test_greedy_action_ties_lowest_index(self):
        q = VectorQTable(np.zeros((1, 3, 2)))
        w = geometric_weights(2.0, 2)
        assert ggf_greedy_action(q, 0, np.zeros(2), w, 0.9) == 0

    def test_greedy_action_prefers_balanced(self):
        q = VectorQTable(np.array([[[10.0, 0.0], [4.0, 4.0]]]))
        w = geometric_weights(2.0, 2)
        # ggf(10,0) = 10/3 < ggf(4,4) = 4
        assert ggf_greedy_action(q, 0, np.zeros(2), w, 1.0) == 1

    def test_q_update_moves_toward_target(self):
        q = VectorQTable(np.zeros((2, 2, 2)))
        w = geometric_weights(2.0, 2)
        r = np.array([1.0, 0.0])
        ggf_q_update(q, (0, 1, r, 1), w, gamma=0.9, alpha=0.5)
        np.testing.assert_allclose(q.Q[0, 1], 0.5 * r, atol=1e-12)
        np.testing.assert_allclose(q.Q[0, 0], 0.0)


class TestRankWeights:
    def test_largest_weight_to_smallest_estimate(self):
        w = geometric_weights(2.0, 3).w
        out = rank_weights(w, np.array([5.0, 1.0, 3.0]))
        assert out[1] == w[0]  # most disadvantaged objective
        assert out[0] == w[2]
        assert out[2] == w[1]

    def test_ties_keep_index_order(self):
        w = geometric_weights(2.0, 2).w
        out = rank_weights(w, np.array([2.0, 2.0]))
        assert out[0] == w[0] and out[1] == w[1]


def one_step_batch(s=0, a=0, r=(1.0, 0.0), behavior=0.5, last=0):
    return Batch(
        states=np.array([[s]]),
        actions=np.array([[a]]),
        rewards=np.array([[list(r)]]),
        behavior=np.array([[behavior]]),
        last_states=np.array([last]),
    )


class TestPolicyGradient:
    def test_empty_batch_raises(self):
        params = SoftmaxPolicyParams(np.zeros((1, 2)))
        critic = CriticTable(np.zeros((1, 2)))
        empty = Batch(np.zeros((0, 1), int), np.zeros((0, 1), int),
                      np.zeros((0, 1, 2)), np.zeros((0, 1)), np.zeros(0, int))
        w = geometric_weights(2.0, 2)
        with pytest.raises(EmptyBatch):
            ggf_policy_gradient_step(params, critic, empty, w, TrainConfig())
        with pytest.raises(EmptyBatch):
            ggf_ppo_step(params, critic, empty, w, TrainConfig())

    def test_positive_advantage_raises_logit(self):
        params = SoftmaxPolicyParams(np.zeros((1, 2)))
        critic = CriticTable(np.zeros((1, 2)))
        w = geometric_weights(2.0, 2)
        cfg = TrainConfig(gamma=0.0)
        ggf_policy_gradient_step(params, critic, one_step_batch(r=(1.0, 1.0)), w, cfg)
        assert params.theta[0, 0] > 0 > params.theta[0, 1]

    def test_ppo_ratio_one_matches_unclipped_gradient(self):
        # with behavior prob equal to current policy prob, ratio = 1 and one
        # clipped-surrogate epoch equals the plain advantage-gradient step
        w = geometric_weights(2.0, 2)
        cfg = TrainConfig(gamma=0.0, lam=1.0)
        batch = one_step_batch(r=(1.0, 1.0), behavior=0.5)
        p1 = SoftmaxPolicyParams(np.zeros((1, 2)))
        c1 = CriticTable(np.zeros((1, 2)))
        ggf_policy_gradient_step(p1, c1, batch, w, cfg)
        p2 = SoftmaxPolicyParams(np.zeros((1, 2)))
        c2 = CriticTable(np.zeros((1, 2)))
        ggf_ppo_step(p2, c2, batch, w, cfg)
        np.testing.assert_allclose(p2.theta, p1.theta, atol=1e-12)

    def test_ppo_clip_deactivates_gradient(self):
        # ratio far above 1 + clip with positive advantage: surrogate is at
        # its clipped plateau, so the actor must not move
        w = geometric_weights(2.0, 2)
        cfg = TrainConfig(gamma=0.0, lam=1.0, clip=0.2)
        batch = one_step_batch(r=(1.0, 1.0), behavior=0.5 / 1.4)  # ratio = 1.4
        params = SoftmaxPolicyParams(np.zeros((1, 2)))
        critic = CriticTable(np.zeros((1, 2)))
        before = params.theta.copy()
        ggf_ppo_step(params, critic, batch, w, cfg)
        np.testing.assert_allclose(params.theta, before, atol=1e-12)


class TestSingleObjectiveReduction:
    """With D = 1 the rank weighting is the identity and every update must
    match the textbook scalar algorithm applied to the same trace."""

    def chain(self):
        P = np.zeros((2, 2, 2))
        P[0] = [[0.8, 0.2], [0.3, 0.7]]
        P[1] = [[0.1, 0.9], [0.6, 0.4]]
        R = np.zeros((2, 2, 1))
        R[0] = [[1.0], [0.0]]
        R[1] = [[0.0], [2.0]]
        return Momdp(P, R, np.array([1.0, 0.0]), 0.9)

    def test_q_update_is_textbook(self):
        m = self.chain()
        w = make_weights("custom", 1, raw=np.array([1.0]))
        q = VectorQTable(np.array(np.random.default_rng(0).normal(size=(2, 2, 1))))
        scalar_q = q.Q[:, :, 0].copy()
        gamma, alpha = 0.9, 0.3
        trace = [(0, 1, 0.0, 1), (1, 0, 0.0, 1), (1, 1, 2.0, 0)]
        for s, a, r, s2 in trace:
            ggf_q_update(q, (s, a, np.array([r]), s2), w, gamma, alpha)
            scalar_q[s, a] += alpha * (r + gamma * scalar_q[s2].max() - scalar_q[s, a])
        np.testing.assert_allclose(q.Q[:, :, 0], scalar_q, atol=1e-12)

    def test_actor_critic_step_is_textbook(self):
        w = make_weights("custom", 1, raw=np.array([1.0]))
        cfg = TrainConfig(gamma=0.9)
        batch = Batch(
            states=np.array([[0, 1, 1]]),
            actions=np.array([[1, 0, 1]]),
            rewards=np.array([[[0.0], [1.0], [2.0]]]),
            behavior=np.full((1, 3), 0.5),
            last_states=np.array([0]),
        )
        params = SoftmaxPolicyParams(np.zeros((2, 2)))
        critic = CriticTable(np.array([[0.3], [0.1]]))
        V = critic.V[:, 0].copy()
        # textbook: returns-to-go with critic bootstrap, advantage baseline
        G = np.zeros(3)
        tail = V[0]
        for t in (2, 1, 0):
            tail = batch.rewards[0, t, 0] + 0.9 * tail
            G[t] = tail
        adv = G - V[[0, 1, 1]]
        expected = np.zeros((2, 2))
        probs = np.full((2, 2), 0.5)
        for t, (s, a) in enumerate(zip([0, 1, 1], [1, 0, 1])):
            grad = -probs[s].copy()
            grad[a] += 1.0
            expected[s] += cfg.lr_actor * adv[t] * grad
        expected[0] /= 1  # one visit to state 0
        expected[1] /= 2  # two visits to state 1
        ggf_policy_gradient_step(params, critic, batch, w, cfg)
        np.testing.assert_allclose(params.theta, expected, atol=1e-12)


class TestTraining:
    def test_unknown_agent(self):
        with pytest.raises(ValueError):
            train("sarsa", one_state(), geometric_weights(2.0, 2), TrainConfig())

    def test_determinism(self):
        m = one_state()
        w = geometric_weights(2.0, 2)
        cfg = TrainConfig(episodes=200, horizon=20, gamma=0.9, seed=4)
        r1 = train("ggf-ppo", m, w, cfg)
        r2 = train("ggf-ppo", m, w, cfg)
        np.testing.assert_array_equal(r1.episode_returns, r2.episode_returns)
        np.testing.assert_array_equal(r1.policy.pi, r2.policy.pi)

    @pytest.mark.parametrize("agent", ["ggf-a2c", "ggf-ppo"])
    def test_fair_pg_finds_randomized_optimum(self, agent):
        m = one_state(0.9)
        w = geometric_weights(2.0, 2)
        cfg = TrainConfig(episodes=1500, horizon=30, gamma=0.9, seed=0)
        res = train(agent, m, w, cfg)
        assert 0.35 <= res.policy.pi[0, 0] <= 0.65
        J = m.mu0 @ evaluate(m, res.policy).V
        assert ggf(w, J) >= 4.5

    def test_ggf_ql_reaches_best_deterministic(self):
        m = one_state(0.9)
        w = geometric_weights(2.0, 2)
        res = train("ggf-ql", m, w, TrainConfig(episodes=1500, horizon=30, gamma=0.9, seed=0))
        J = m.mu0 @ evaluate(m, res.policy).V
        assert ggf(w, J) >= 0.85 * (10 / 3)
