"""Numerical verification of the discounted-to-average approximation bound.

A discounted-optimal policy's long-run average welfare can trail the
average-optimal welfare by at most

    R_bar (1 - gamma) (rho(gamma, sigma_avg) + rho(gamma, sigma_gamma)),

with rho(gamma, sigma) = sigma / (gamma - (1 - gamma) sigma), valid for
gamma above sigma/(sigma+1) for both policies' chains.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import GammaBelowThreshold
from .exact import cesaro_limit, drazin, gamma_threshold
from .ggf import GgfWeights, ggf
from .momdp import Momdp, induce
from .optimal import GgfSolution, solve_ggf_average, solve_ggf_discounted

HOLDS_SLACK = 1e-8

#: Norm convention for R_bar: max over states of the l1 norm of the
#: per-state reward vector. The max over all policies of that quantity is
#: attained at a deterministic action choice per state (the l1 norm is
#: convex in the action distribution), so max over (s, a) is exact.
R_BAR_METHOD = "exact-per-state-max"


def rho(gamma: float, sigma: float) -> float:
    return sigma / (gamma - (1.0 - gamma) * sigma)


def reward_bound(m: Momdp) -> float:
    """max over policies of max_s ||R_pi[s]||_1, computed exactly."""
    return float(np.abs(m.R).sum(axis=2).max())


@dataclass(frozen=True)
class BoundReport:
    gamma: float
    sigma_H_gamma: float
    sigma_H_avg: float
    gamma_threshold: float
    R_bar: float
    rho_gamma: float
    rho_avg: float
    bound_value: float
    ggf_gain_gamma: float
    ggf_gain_avg: float
    gap: float
    holds: bool
    r_bar_method: str = R_BAR_METHOD
    error: str = ""

    CSV_COLUMNS = (
        "gamma,sigma_H_gamma,sigma_H_avg,gamma_threshold,R_bar,rho_gamma,rho_avg,"
        "bound_value,ggf_gain_gamma,ggf_gain_avg,gap,holds,r_bar_method,error"
    )

    def csv_row(self) -> str:
        vals = [
            self.gamma, self.sigma_H_gamma, self.sigma_H_avg, self.gamma_threshold,
            self.R_bar, self.rho_gamma, self.rho_avg, self.bound_value,
            self.ggf_gain_gamma, self.ggf_gain_avg, self.gap,
        ]
        return ",".join(repr(v) for v in vals) + f",{self.holds},{self.r_bar_method},{self.error}"


def _policy_ggf_gain(m: Momdp, sol: GgfSolution, w: GgfWeights):
    chain = induce(m, sol.policy)
    P_star = cesaro_limit(chain.P_pi)
    _, sigma = drazin(chain.P_pi, P_star)
    g = m.mu0 @ (P_star @ chain.R_pi)
    return ggf(w, g), sigma


def theorem6_report(m: Momdp, w: GgfWeights, gamma: float, raise_below: bool = True) -> BoundReport:
    """Solve both criteria, evaluate the bound, and report whether it holds."""
    m_gamma = m.with_gamma(gamma)
    sol_gamma = solve_ggf_discounted(m_gamma, w)
    sol_avg = solve_ggf_average(m, w)
    ggf_gain_gamma, sigma_gamma = _policy_ggf_gain(m, sol_gamma, w)
    ggf_gain_avg, sigma_avg = _policy_ggf_gain(m, sol_avg, w)
    threshold = max(gamma_threshold(sigma_gamma), gamma_threshold(sigma_avg))
    common = dict(
        gamma=gamma,
        sigma_H_gamma=sigma_gamma,
        sigma_H_avg=sigma_avg,
        gamma_threshold=threshold,
        R_bar=reward_bound(m),
        ggf_gain_gamma=ggf_gain_gamma,
        ggf_gain_avg=ggf_gain_avg,
        gap=ggf_gain_avg - ggf_gain_gamma,
    )
    if gamma <= threshold:
        if raise_below:
            raise GammaBelowThreshold(threshold, 1.0, gamma)
        return BoundReport(
            rho_gamma=float("nan"), rho_avg=float("nan"), bound_value=float("nan"),
            holds=False, error=f"gamma {gamma} below threshold {threshold}", **common,
        )
    rho_gamma = rho(gamma, sigma_gamma)
    rho_avg = rho(gamma, sigma_avg)
    bound_value = common["R_bar"] * (1.0 - gamma) * (rho_avg + rho_gamma)
    holds = ggf_gain_gamma >= ggf_gain_avg - bound_value - HOLDS_SLACK
    return BoundReport(
        rho_gamma=rho_gamma, rho_avg=rho_avg, bound_value=bound_value, holds=holds, **common
    )


def corollary7_report(m: Momdp, gamma: float, raise_below: bool = True) -> BoundReport:
    """Single-objective specialization: the welfare of a scalar is the scalar."""
    if m.num_objectives != 1:
        raise ValueError("corollary7_report requires a single-objective instance")
    return theorem6_report(m, GgfWeights(np.array([1.0])), gamma, raise_below=raise_below)


def gamma_sweep(m: Momdp, w: GgfWeights, gammas) -> list:
    """One report per gamma, in input order; below-threshold entries carry
    an error message instead of raising."""
    return [theorem6_report(m, w, g, raise_below=False) for g in gammas]
