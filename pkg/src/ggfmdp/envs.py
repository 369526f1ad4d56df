"""Shipped MOMDP instances and generators.

All builders return plain `Momdp` values. Generators that add an
epsilon-restart to the initial distribution produce chains that stay
communicating under every policy.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadParams
from .exact import cesaro_limit
from .momdp import Momdp, StochasticPolicy, induce
from .numkit.rng import Rng, next_float


def one_state(gamma: float = 0.9) -> Momdp:
    """Single state, two actions rewarding objective 0 or objective 1.

    The canonical instance where randomization strictly beats every
    deterministic policy under a fairness welfare.
    """
    P = np.ones((2, 1, 1))
    R = np.array([[[1.0, 0.0]], [[0.0, 1.0]]])
    return Momdp(P, R, np.array([1.0]), gamma, "one_state")


def example1(gamma: float = 0.7, start: int = 0) -> Momdp:
    """Three-state deterministic chain exhibiting state-dependent fair
    optimality under discounting.

    Action 0 is "up", action 1 is "down". The stage-2 rewards carry a 1/gamma
    factor, so every plan's discounted return from the first state is
    gamma-invariant.
    """
    if not 0 < gamma < 1:
        raise BadParams("gamma must lie in (0, 1)")
    if start not in (0, 1):
        raise BadParams("start must be state 0 or 1")
    P = np.zeros((2, 3, 3))
    for a in range(2):
        P[a, 0, 1] = 1.0
        P[a, 1, 2] = 1.0
        P[a, 2, 2] = 1.0
    R = np.zeros((2, 3, 2))
    R[0, 0] = (7.0, 0.0)
    R[1, 0] = (0.0, 0.0)
    R[0, 1] = (0.0, 7.0 / gamma)
    R[1, 1] = (5.0 / gamma, 5.0 / gamma)
    mu0 = np.zeros(3)
    mu0[start] = 1.0
    return Momdp(P, R, mu0, gamma, "example1")


@dataclass(frozen=True)
class SpeciesParams:
    """Birth-death rates for the two-species conservation model."""

    otter_up: float = 0.45  # natural growth, boosted by introduction
    otter_down: float = 0.05
    otter_up_introduce: float = 0.85
    otter_down_control: float = 0.75
    predation: float = 0.65  # abalone down-probability per unit otter density
    abalone_up: float = 0.30
    poaching: float = 0.40  # abalone down-probability without antipoaching
    poaching_protected: float = 0.05
    catastrophe: float = 0.02  # oil-spill style collapse of the otter level
    eps_restart: float = 0.01


ACTION_NOTHING, ACTION_INTRODUCE, ACTION_ANTIPOACH, ACTION_CONTROL, ACTION_HALF = range(5)


def _birth_death_row(level: int, levels: int, p_up: float, p_down: float) -> np.ndarray:
    row = np.zeros(levels)
    up = p_up if level < levels - 1 else 0.0
    down = p_down if level > 0 else 0.0
    total = up + down
    if total > 1.0:  # competing risks, renormalized
        up, down = up / total, down / total
        total = 1.0
    if level < levels - 1:
        row[level + 1] = up
    if level > 0:
        row[level - 1] = down
    row[level] += 1.0 - total
    return row


def species_lite(
    levels_otter: int = 5, levels_abalone: int = 5, params: SpeciesParams = None, gamma: float = 0.95
) -> Momdp:
    """Coupled two-species birth-death chain with five management actions.

    States are (otter level, abalone level) pairs; rewards are the two
    species densities in [0, 1]. Otters grow easily and prey on abalone,
    so maximizing total density favors otters while fair policies must
    control them and fight poaching.
    """
    if levels_otter < 3 or levels_abalone < 3:
        raise BadParams("each species needs at least 3 levels")
    p = params or SpeciesParams()
    Lo, La = levels_otter, levels_abalone
    S = Lo * La
    A = 5
    sid = lambda o, ab: o * La + ab

    mu0 = np.zeros(S)
    mu0[sid(0, La - 1)] = 1.0  # no otters, abundant abalone

    P = np.zeros((A, S, S))
    R = np.zeros((A, S, 2))
    for o in range(Lo):
        for ab in range(La):
            s = sid(o, ab)
            density_o = o / (Lo - 1)
            for a in range(A):
                o_up, o_down = p.otter_up, p.otter_down
                poach = p.poaching
                if a == ACTION_INTRODUCE:
                    o_up = p.otter_up_introduce
                elif a == ACTION_ANTIPOACH:
                    poach = p.poaching_protected
                elif a == ACTION_CONTROL:
                    o_down = p.otter_down_control
                    o_up = 0.05
                elif a == ACTION_HALF:
                    o_down = 0.5 * (p.otter_down + p.otter_down_control)
                    poach = 0.5 * (p.poaching + p.poaching_protected)
                if o == 0 and a != ACTION_INTRODUCE:
                    o_up = 0.0  # extinct otters only recover via introduction
                ab_down = min(poach + p.predation * density_o, 0.95)
                row_o = _birth_death_row(o, Lo, o_up, o_down)
                row_ab = _birth_death_row(ab, La, p.abalone_up, ab_down)
                # catastrophe knocks otters to level 0 regardless of action
                row_o = (1.0 - p.catastrophe) * row_o + p.catastrophe * np.eye(Lo)[0]
                P[a, s] = np.kron(row_o, row_ab)
                R[a, s] = (density_o, ab / (La - 1))
    restart = np.tile(mu0, (S, 1))
    P = (1.0 - p.eps_restart) * P + p.eps_restart * restart[None, :, :]
    return Momdp(P, R, mu0, gamma, f"species:{Lo}x{La}")


def resource_alloc_lite(
    d_hosts: int = 4, levels: int = 4, capacity: float = 1.0, gamma: float = 0.95,
    eps_restart: float = 0.01, asym: float = 0.15,
) -> Momdp:
    """Shared-queue bandwidth allocation with per-host reward a_i(1 - 2q).

    The action menu is one equal split plus one host-favoring profile per
    host. With `asym` > 0 (the default) favoring earlier hosts yields a
    slightly larger total, so a utilitarian objective concentrates on one
    host while fair policies must rotate the favors; with asym = 0 the menu
    is symmetric and the fair-optimal gains equalize exactly.
    """
    if d_hosts > 6:
        raise BadParams("tabular model supports at most 6 hosts")
    if levels < 2:
        raise BadParams("queue needs at least 2 levels")
    D = d_hosts
    A = D + 1
    S = levels
    favored_share = 0.7 * capacity
    base_share = (capacity - favored_share) / (D - 1)
    menu = np.full((A, D), capacity / D)
    for i in range(D):
        scale = 1.0 + asym * (D - 1 - i) / (D - 1)
        menu[1 + i] = base_share * scale
        menu[1 + i, i] = favored_share * scale

    P = np.zeros((A, S, S))
    R = np.zeros((A, S, D))
    for q in range(S):
        q_norm = q / (levels - 1)
        for a in range(A):
            # totals all equal capacity: the queue drains faster than it
            # fills, so the stationary mass sits at short queues and the
            # reward factor (1 - 2q) stays mostly positive
            up = 0.20 if q < S - 1 else 0.0
            down = 0.50 if q > 0 else 0.0
            row = np.zeros(S)
            if q < S - 1:
                row[q + 1] = up
            if q > 0:
                row[q - 1] = down
            row[q] += 1.0 - up - down
            P[a, q] = row
            R[a, q] = menu[a] * (1.0 - 2.0 * q_norm)
    mu0 = np.zeros(S)
    mu0[0] = 1.0
    restart = np.tile(mu0, (S, 1))
    P = (1.0 - eps_restart) * P + eps_restart * restart[None, :, :]
    return Momdp(P, R, mu0, gamma, f"resalloc:{D}x{levels}")


def garnet(
    S: int,
    A: int,
    D: int,
    branching: int,
    seed: int,
    eps_restart: float = 0.05,
    gamma: float = 0.95,
    require_communicating: bool = False,
) -> Momdp:
    """Random MOMDP: `branching` random successors per (a, s) with random
    probabilities, uniform [0,1] vector rewards, epsilon-restart mixing."""
    if branching > S or branching < 1:
        raise BadParams(f"branching must lie in 1..{S}")
    if not 0.0 <= eps_restart <= 0.2:
        raise BadParams("eps_restart must lie in [0, 0.2]")
    if require_communicating and eps_restart == 0.0 and branching == 1:
        raise BadParams("branching=1 with no restart cannot guarantee a communicating chain")
    rng = Rng(seed)
    P = np.zeros((A, S, S))
    R = np.empty((A, S, D))
    mu0 = np.full(S, 1.0 / S)
    for a in range(A):
        for s in range(S):
            succ = _sample_without_replacement(rng, S, branching)
            raw = np.array([-np.log(1.0 - rng.next_float()) for _ in range(branching)])
            P[a, s, succ] = raw / raw.sum()
            for d in range(D):
                R[a, s, d] = rng.next_float()
    P = (1.0 - eps_restart) * P + eps_restart * mu0[None, None, :]
    return Momdp(P, R, mu0, gamma, f"garnet:{S},{A},{D},{branching},{seed}")


def _sample_without_replacement(rng: Rng, n: int, k: int) -> np.ndarray:
    pool = list(range(n))
    out = np.empty(k, dtype=np.int64)
    for i in range(k):
        j = int(rng.next_float() * (n - i))
        j = min(j, n - i - 1)
        out[i] = pool.pop(j)
    return out


def is_communicating(m: Momdp, tol: float = 1e-12) -> bool:
    """True if the uniform policy's Cesaro-limit matrix is strictly positive."""
    uniform = StochasticPolicy.uniform(m.num_states, m.num_actions)
    P_star = cesaro_limit(induce(m, uniform).P_pi)
    return bool(np.all(P_star > tol))


def env_from_id(env_id: str, gamma: float = None) -> Momdp:
    """Resolve the CLI env ids: one_state, example1, species:LxL,
    resalloc:DxL, garnet:S,A,D,b,seed."""
    kwargs = {} if gamma is None else {"gamma": gamma}
    if env_id == "one_state":
        return one_state(**kwargs)
    if env_id == "example1":
        return example1(**kwargs)
    if env_id.startswith("species:"):
        lo, la = (int(t) for t in env_id.split(":", 1)[1].split("x"))
        return species_lite(lo, la, **kwargs)
    if env_id.startswith("resalloc:"):
        d, lev = (int(t) for t in env_id.split(":", 1)[1].split("x"))
        return resource_alloc_lite(d, lev, **kwargs)
    if env_id.startswith("garnet:"):
        parts = [int(t) for t in env_id.split(":", 1)[1].split(",")]
        if len(parts) != 5:
            raise BadParams("garnet id must be garnet:S,A,D,branching,seed")
        return garnet(*parts, **kwargs)
    raise BadParams(f"unknown env id {env_id!r}")
