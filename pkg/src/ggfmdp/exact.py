"""Exact evaluation of a fixed stationary policy.

Everything here is a direct linear solve or a matrix limit: discounted
values, occupation measures, the Cesaro-limit matrix, gains, the group
(Drazin) inverse of I - P, and the Laurent-series reconstruction of the
discounted value from the gain.
"""

from dataclasses import dataclass

import numpy as np

from .errors import GammaOutOfRange, GammaTooCloseToThreshold, NoConvergence
from .momdp import InducedChain, Momdp, StochasticPolicy, induce
from .numkit import lu_solve, spectral_radius

CESARO_TOL = 1e-10
LAURENT_TERM_TOL = 1e-12
LAURENT_MAX_TERMS = 10_000


@dataclass(frozen=True)
class ExactEvaluation:
    """Per-policy bundle of exact quantities."""

    V: np.ndarray  # (S, D) discounted value
    x_gamma: np.ndarray  # (S,) discounted occupation, total mass 1/(1-gamma)
    P_star: np.ndarray  # (S, S) Cesaro-limit matrix
    g: np.ndarray  # (S, D) gain
    x_stat: np.ndarray  # (S,) stationary distribution from mu0
    H: np.ndarray  # (S, S) Drazin inverse of I - P_pi
    sigma_H: float


def value_discounted(m: Momdp, policy: StochasticPolicy, chain: InducedChain = None) -> np.ndarray:
    """Solve (I - gamma P_pi) V = R_pi, one objective per column."""
    chain = chain or induce(m, policy)
    S = chain.P_pi.shape[0]
    return lu_solve(np.eye(S) - m.gamma * chain.P_pi, chain.R_pi)


def occupation_discounted(m: Momdp, policy: StochasticPolicy, chain: InducedChain = None) -> np.ndarray:
    """Row vector x with x (I - gamma P_pi) = mu0, solved via the transpose."""
    chain = chain or induce(m, policy)
    S = chain.P_pi.shape[0]
    return lu_solve((np.eye(S) - m.gamma * chain.P_pi).T, m.mu0)


def cesaro_limit(P_pi: np.ndarray, tol: float = CESARO_TOL, max_doublings: int = 200) -> np.ndarray:
    """Cesaro limit of P_pi^n.

    Computed as the limit of B^(2^k) for B = (I + P)/2: averaging with the
    identity removes periodic eigenvalues while preserving the spectral
    projector at 1, which is exactly the Cesaro limit. Squaring converges
    in a few dozen matrix products even for periodic or multichain P.
    """
    P_pi = np.asarray(P_pi, dtype=np.float64)
    B = 0.5 * (np.eye(P_pi.shape[0]) + P_pi)
    for _ in range(max_doublings):
        nxt = B @ B
        if np.max(np.abs(nxt - B)) < tol:
            return nxt
        B = nxt
    raise NoConvergence(f"Cesaro limit did not converge within {max_doublings} doublings")


def gain(m: Momdp, policy: StochasticPolicy, chain: InducedChain = None, P_star: np.ndarray = None) -> np.ndarray:
    """Long-run average reward per state: P_star R_pi."""
    chain = chain or induce(m, policy)
    if P_star is None:
        P_star = cesaro_limit(chain.P_pi)
    return P_star @ chain.R_pi


def drazin(P_pi: np.ndarray, P_star: np.ndarray = None):
    """Drazin inverse of I - P_pi and its spectral radius.

    H = (I - P + P*)^-1 (I - P*); the matrix being inverted is always
    nonsingular for stochastic P.
    """
    P_pi = np.asarray(P_pi, dtype=np.float64)
    if P_star is None:
        P_star = cesaro_limit(P_pi)
    S = P_pi.shape[0]
    I = np.eye(S)
    H = lu_solve(I - P_pi + P_star, I - P_star)
    return H, spectral_radius(H)


def gamma_threshold(sigma_H: float) -> float:
    """Lower edge of the discount range where the Laurent series converges."""
    return sigma_H / (sigma_H + 1.0)


def laurent_value(
    m: Momdp,
    policy: StochasticPolicy,
    chain: InducedChain = None,
    H: np.ndarray = None,
    sigma_H: float = None,
    g: np.ndarray = None,
) -> np.ndarray:
    """Discounted value reconstructed from the gain via the Laurent series:

        V = g / (1 - gamma) + (1/gamma) sum_n ((gamma-1)/gamma)^n H^(n+1) R_pi

    valid for gamma in (sigma_H / (sigma_H + 1), 1).
    """
    chain = chain or induce(m, policy)
    if H is None or sigma_H is None:
        H, sigma_H = drazin(chain.P_pi)
    thr = gamma_threshold(sigma_H)
    if not thr < m.gamma < 1:
        raise GammaOutOfRange(thr, 1.0, m.gamma)
    if g is None:
        g = gain(m, policy, chain)
    ratio = (m.gamma - 1.0) / m.gamma
    term = H @ chain.R_pi  # H^(n+1) R_pi scaled by ratio^n, starting at n=0
    series = term.copy()
    for _ in range(LAURENT_MAX_TERMS):
        if np.max(np.abs(term)) < LAURENT_TERM_TOL:
            return g / (1.0 - m.gamma) + series / m.gamma
        term = ratio * (H @ term)
        series += term
    raise GammaTooCloseToThreshold(
        f"series did not shrink below {LAURENT_TERM_TOL} in {LAURENT_MAX_TERMS} terms "
        f"(gamma={m.gamma}, threshold={thr})"
    )


def evaluate(m: Momdp, policy: StochasticPolicy) -> ExactEvaluation:
    """Full exact-evaluation bundle for one policy."""
    chain = induce(m, policy)
    P_star = cesaro_limit(chain.P_pi)
    H, sigma_H = drazin(chain.P_pi, P_star)
    return ExactEvaluation(
        V=value_discounted(m, policy, chain),
        x_gamma=occupation_discounted(m, policy, chain),
        P_star=P_star,
        g=P_star @ chain.R_pi,
        x_stat=m.mu0 @ P_star,
        H=H,
        sigma_H=sigma_H,
    )
