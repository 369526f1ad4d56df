"""Deterministic PRNG (splitmix64).

The generator is a 64-bit splitmix64 counter: the same seed produces the
same stream on every platform, with or without JIT. State lives in a
one-element uint64 array so the jitted kernels can advance it in place.
"""

import numpy as np

from .._jit import njit
from ..errors import BadDistribution

ALGORITHM = "splitmix64"

_GOLD = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True)
def next_u64(state):
    state[0] = state[0] + _GOLD
    z = state[0]
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True)
def next_float(state):
    """Uniform double in [0, 1) from the top 53 bits."""
    return float(next_u64(state) >> _S11) * _INV53


@njit(cache=True)
def choice(state, probs):
    """Sample an index according to `probs` by inverse CDF."""
    u = next_float(state)
    acc = 0.0
    last = len(probs) - 1
    for i in range(last):
        acc += probs[i]
        if u < acc:
            return i
    return last


def seed_state(seed):
    """Fresh state array for a 64-bit seed (negative seeds wrap)."""
    return np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF)], dtype=np.uint64)


class Rng:
    """Single-owner deterministic random stream."""

    algorithm = ALGORITHM

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.state = seed_state(self.seed)

    def next_float(self) -> float:
        return next_float(self.state)

    def choice(self, probs) -> int:
        probs = np.asarray(probs, dtype=np.float64)
        if probs.ndim != 1 or np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
            raise BadDistribution(
                f"probs must be nonnegative and sum to 1 +- 1e-9, got sum {probs.sum()!r}"
            )
        return int(choice(self.state, probs))

    def spawn(self, stream: int) -> "Rng":
        """Independent child stream; deterministic in (seed, stream)."""
        child = Rng(0)
        child.state = seed_state(self.seed ^ (0xDA3E39CB94B95BDB * (stream + 1)))
        child.seed = int(child.state[0])
        return child
