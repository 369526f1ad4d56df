"""Hot numeric kernels: trajectory sampling and tabular Q-learning.

These inner loops dominate runtime in the experiment harness (hundreds of
training runs of ~1e5 sampled steps each). They are compiled with numba
unless ``GGFMDP_DISABLE_NUMBA=1``; the fallback executes the same bodies
uncompiled, so outputs are bitwise identical either way.
"""

import numpy as np

from ._jit import njit
from .numkit.rng import choice, next_float


@njit(cache=True)
def ggf_dot(w, v):
    """GGF of v: weights dotted with v sorted ascending."""
    return np.dot(w, np.sort(v))


@njit(cache=True)
def rollout_kernel(P, R, mu0, pi, horizon, rstate):
    """Sample one trajectory under a fixed row-stochastic policy."""
    D = R.shape[2]
    states = np.empty(horizon + 1, dtype=np.int64)
    actions = np.empty(horizon, dtype=np.int64)
    rewards = np.empty((horizon, D), dtype=np.float64)
    s = choice(rstate, mu0)
    states[0] = s
    for t in range(horizon):
        a = choice(rstate, pi[s])
        actions[t] = a
        rewards[t] = R[a, s]
        s = choice(rstate, P[a, s])
        states[t + 1] = s
    return states, actions, rewards


@njit(cache=True)
def softmax_row(theta_row):
    z = theta_row - np.max(theta_row)
    e = np.exp(z)
    return e / np.sum(e)


@njit(cache=True)
def collect_batch_kernel(P, R, mu0, theta, n_episodes, horizon, rstate):
    """Sample a batch of episodes under the softmax policy of `theta`.

    Returns per-step states/actions/rewards, the behavior probability of
    each chosen action, and the state following each episode's last step.
    """
    D = R.shape[2]
    states = np.empty((n_episodes, horizon), dtype=np.int64)
    actions = np.empty((n_episodes, horizon), dtype=np.int64)
    rewards = np.empty((n_episodes, horizon, D), dtype=np.float64)
    behavior = np.empty((n_episodes, horizon), dtype=np.float64)
    last_states = np.empty(n_episodes, dtype=np.int64)
    for e in range(n_episodes):
        s = choice(rstate, mu0)
        for t in range(horizon):
            p = softmax_row(theta[s])
            a = choice(rstate, p)
            states[e, t] = s
            actions[e, t] = a
            rewards[e, t] = R[a, s]
            behavior[e, t] = p[a]
            s = choice(rstate, P[a, s])
        last_states[e] = s
    return states, actions, rewards, behavior, last_states


@njit(cache=True)
def ggf_greedy_kernel(Q_s, r, w, gamma):
    """argmax_a GGF(w, r + gamma * Q[s, a]); ties go to the lowest index."""
    A = Q_s.shape[0]
    best_a = 0
    best_v = -np.inf
    for a in range(A):
        v = ggf_dot(w, r + gamma * Q_s[a])
        if v > best_v:
            best_v = v
            best_a = a
    return best_a


@njit(cache=True)
def q_train_kernel(
    P,
    R,
    mu0,
    Q,
    w,
    gamma,
    episodes,
    horizon,
    alpha,
    eps_start,
    eps_final,
    rstate,
    ep_returns,
):
    """epsilon-greedy tabular Q-learning on vector Q-values, in place.

    Action selection is greedy on GGF(w, Q[s, a]); the bootstrap target
    re-selects at s' with the sampled reward inside the argmax. Exploration
    decays linearly from eps_start to eps_final over the run.
    """
    S, A, D = Q.shape
    zero = np.zeros(D)
    total = episodes * horizon
    step = 0
    for ep in range(episodes):
        s = choice(rstate, mu0)
        ret = np.zeros(D)
        for t in range(horizon):
            frac = step / max(total - 1, 1)
            eps = eps_start + (eps_final - eps_start) * frac
            if next_float(rstate) < eps:
                a = int(next_float(rstate) * A)
                if a == A:
                    a = A - 1
            else:
                a = ggf_greedy_kernel(Q[s], zero, w, 1.0)
            r = R[a, s]
            s2 = choice(rstate, P[a, s])
            a_star = ggf_greedy_kernel(Q[s2], r, w, gamma)
            Q[s, a] += alpha * (r + gamma * Q[s2, a_star] - Q[s, a])
            ret += r
            s = s2
            step += 1
        ep_returns[ep] = ret
