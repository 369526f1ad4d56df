"""Exact GGF-optimal solvers via linear programming over occupation measures.

The min-over-permutations form of the welfare is linearized exactly with
rank-value and deviation auxiliaries (D^2 constraints instead of D!
permutations), so the LP optimum equals the true GGF optimum.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import LpFailure, NotUnichainWarning
from .exact import cesaro_limit, value_discounted
from .ggf import GgfWeights, ggf
from .momdp import Momdp, StochasticPolicy, induce
from .numkit import OPTIMAL, LinearProgram, lu_solve, simplex_solve

ZERO_MASS_TOL = 1e-12

DISCOUNTED = "discounted"
AVERAGE = "average"


@dataclass(frozen=True)
class GgfSolution:
    occupation: np.ndarray  # (S, A)
    policy: StochasticPolicy
    J: np.ndarray  # (D,)
    ggf_value: float
    criterion: str


def _owa_lp(m: Momdp, w: GgfWeights, criterion: str) -> LinearProgram:
    """Occupation-measure LP with the OWA linearization of the welfare.

    Variables: y[s,a] >= 0, rank values r_k (free), deviations d[i,k] >= 0.
    Objective: max sum_k (w_k - w_{k+1}) (k r_k - sum_i d[i,k]), which
    equals the welfare because k r_k - sum_i d[i,k] <= sum of the k
    smallest objective values, with equality at the optimum.
    """
    S, A, D = m.num_states, m.num_actions, m.num_objectives
    ny = S * A
    n = ny + D + D * D
    iy = lambda s, a: s * A + a
    ir = lambda k: ny + k
    id_ = lambda i, k: ny + D + i * D + k

    c = np.zeros(n)
    dw = np.append(w.w, 0.0)
    for k in range(D):
        delta = dw[k] - dw[k + 1]
        c[ir(k)] = delta * (k + 1)
        for i in range(D):
            c[id_(i, k)] = -delta

    rows, rel, rhs = [], [], []
    gamma = m.gamma if criterion == DISCOUNTED else 1.0
    # Flow conservation: out-mass of s' minus (discounted) in-flow.
    for sp in range(S):
        row = np.zeros(n)
        for a in range(A):
            row[iy(sp, a)] += 1.0
        for s in range(S):
            for a in range(A):
                row[iy(s, a)] -= gamma * m.P[a, s, sp]
        rows.append(row)
        rel.append("=")
        rhs.append(m.mu0[sp] if criterion == DISCOUNTED else 0.0)
    if criterion == AVERAGE:
        row = np.zeros(n)
        row[:ny] = 1.0
        rows.append(row)
        rel.append("=")
        rhs.append(1.0)
    # OWA linearization: r_k - d[i,k] <= J_i = sum_{s,a} y[s,a] R[a,s,i].
    for i in range(D):
        for k in range(D):
            row = np.zeros(n)
            row[ir(k)] = 1.0
            row[id_(i, k)] = -1.0
            for s in range(S):
                for a in range(A):
                    row[iy(s, a)] -= m.R[a, s, i]
            rows.append(row)
            rel.append("<=")
            rhs.append(0.0)

    lb = np.zeros(n)
    lb[ny : ny + D] = -np.inf  # rank values are free
    return LinearProgram(c=c, A=np.array(rows), rel=rel, b=np.array(rhs), lb=lb)


def _recover(m: Momdp, y: np.ndarray, criterion: str) -> GgfSolution:
    S, A, D = m.num_states, m.num_actions, m.num_objectives
    occ = y.reshape(S, A).copy()
    occ[occ < 0] = 0.0  # clip simplex round-off
    mass = occ.sum(axis=1)
    pi = np.full((S, A), 1.0 / A)
    reached = mass > ZERO_MASS_TOL
    pi[reached] = occ[reached] / mass[reached, None]
    J = np.einsum("sa,asd->d", occ, m.R)
    return GgfSolution(
        occupation=occ,
        policy=StochasticPolicy(pi),
        J=J,
        ggf_value=0.0,  # patched by callers
        criterion=criterion,
    )


def _solve(m: Momdp, w: GgfWeights, criterion: str) -> GgfSolution:
    res = simplex_solve(_owa_lp(m, w, criterion))
    if res.status != OPTIMAL:
        raise LpFailure(res.status, f"GGF {criterion} LP")
    sol = _recover(m, res.x[: m.num_states * m.num_actions], criterion)
    return GgfSolution(sol.occupation, sol.policy, sol.J, float(res.value), criterion)


def solve_ggf_discounted(m: Momdp, w: GgfWeights) -> GgfSolution:
    return _solve(m, w, DISCOUNTED)


def solve_ggf_average(m: Momdp, w: GgfWeights) -> GgfSolution:
    sol = _solve(m, w, AVERAGE)
    P_star = cesaro_limit(induce(m, sol.policy).P_pi)
    spread = np.max(P_star.max(axis=0) - P_star.min(axis=0))
    if spread > 1e-6:
        warnings.warn(
            f"recovered average-optimal policy is not unichain (P* row spread {spread:.2e}); "
            "the LP assumed a single recurrent class",
            NotUnichainWarning,
        )
    return sol


def value_iteration_scalar(m: Momdp, tol: float = 1e-10, max_iter: int = 10_000_000):
    """Bellman-optimality iteration for single-objective instances.

    Returns the exact value of the extracted greedy policy (solved by LU,
    so the reported optimum is not limited by the iteration tolerance).
    """
    if m.num_objectives != 1:
        raise ValueError("value iteration baseline requires D=1")
    S, A = m.num_states, m.num_actions
    R = m.R[:, :, 0]  # (A, S)
    V = np.zeros(S)
    for _ in range(max_iter):
        Q = R + m.gamma * np.einsum("asr,r->as", m.P, V)
        V_new = Q.max(axis=0)
        if np.max(np.abs(V_new - V)) < tol:
            V = V_new
            break
        V = V_new
    greedy = np.argmax(R + m.gamma * np.einsum("asr,r->as", m.P, V), axis=0)
    policy = StochasticPolicy.deterministic(greedy, A)
    V_exact = value_discounted(m, policy)[:, 0]
    return V_exact, policy
