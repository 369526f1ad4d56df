"""Desk-scale toolkit for fair multiobjective sequential decision making.

Fair welfare (generalized Gini) scalarization of vector-reward MDPs:
exact policy evaluation (discounted, average, Laurent/bias machinery),
occupation-measure LPs for welfare-optimal stochastic policies,
discount-vs-average approximation bounds, and tabular learning agents.
"""

from . import agents, bounds, envs, exact, ggf, harness, momdp, numkit, optimal
from ._jit import JIT_ENABLED
from .bounds import BoundReport, corollary7_report, gamma_sweep, theorem6_report
from .envs import env_from_id, example1, garnet, one_state, resource_alloc_lite, species_lite
from .exact import ExactEvaluation, cesaro_limit, drazin, evaluate, gamma_threshold, laurent_value
from .ggf import GgfWeights, geometric_weights, ggf, ggf_minperm, make_weights, weights_from_name
from .harness import ExperimentConfig, RunRecord, cv, ggf_score, run_experiment
from .momdp import Momdp, StochasticPolicy, induce, load_instance, rollout, save_instance
from .optimal import GgfSolution, solve_ggf_average, solve_ggf_discounted, value_iteration_scalar

__version__ = "0.1.0"
