"""Generalized Gini social welfare: sort-weighted utility aggregation.

The welfare of a utility vector is the dot product of a strictly
decreasing, normalized weight vector with the utilities sorted ascending,
so the worst-off component always receives the largest weight.
"""

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    InvalidPreset,
    InvalidTransfer,
)

#: Perturbation used by the utilitarian / maxmin presets, which are limits
#: that would otherwise violate strict decrease.
PRESET_EPS = 1e-6

MAX_ENUM_DIM = 8


@dataclass(frozen=True)
class GgfWeights:
    """Strictly decreasing positive weights summing to 1."""

    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        object.__setattr__(self, "w", w)
        if w.ndim != 1 or w.size < 1:
            raise InvalidPreset("weights must be a nonempty vector")
        if np.any(w <= 0) or np.any(np.diff(w) >= 0):
            raise InvalidPreset("weights must be positive and strictly decreasing")
        if abs(w.sum() - 1.0) > 1e-12:
            raise InvalidPreset(f"weights must sum to 1, got {w.sum()!r}")

    @property
    def dim(self) -> int:
        return self.w.size


def ggf(weights: GgfWeights, v) -> float:
    """Welfare of `v`: weights dotted with `v` sorted ascending."""
    v = np.asarray(v, dtype=np.float64)
    if v.size != weights.dim:
        raise DimensionMismatch(f"expected {weights.dim} utilities, got {v.size}")
    return float(weights.w @ np.sort(v, kind="stable"))


def ggf_minperm(weights: GgfWeights, v) -> float:
    """Welfare as min over weight permutations; brute-force oracle for ggf."""
    v = np.asarray(v, dtype=np.float64)
    if v.size != weights.dim:
        raise DimensionMismatch(f"expected {weights.dim} utilities, got {v.size}")
    if v.size > MAX_ENUM_DIM:
        raise DimensionTooLarge(f"permutation enumeration capped at D={MAX_ENUM_DIM}")
    return min(float(np.dot(weights.w[list(p)], v)) for p in permutations(range(v.size)))


def geometric_weights(base: float, D: int) -> GgfWeights:
    if base <= 1:
        raise InvalidPreset("geometric base must exceed 1")
    raw = base ** -np.arange(D, dtype=np.float64)
    return GgfWeights(raw / raw.sum())


def make_weights(kind: str, D: int, base: float = 2.0, eps: float = PRESET_EPS, raw=None) -> GgfWeights:
    """Build a weight preset.

    kind is one of "geometric" (w_i ~ base^-i), "utilitarian_eps" (near-flat
    with an eps ramp to keep strict decrease), "maxmin_eps" (nearly all mass
    on the worst-off component), or "custom" (normalize `raw`).
    """
    if D < 1:
        raise InvalidPreset("D must be at least 1")
    if kind == "geometric":
        return geometric_weights(base, D)
    if kind == "utilitarian_eps":
        if not 0 < eps < 1 / max(D, 2):
            raise InvalidPreset("eps must lie in (0, 1/D)")
        raw = 1.0 + eps * np.arange(D - 1, -1, -1, dtype=np.float64)
    elif kind == "maxmin_eps":
        if not 0 < eps < 1:
            raise InvalidPreset("eps must lie in (0, 1)")
        raw = np.concatenate(([1.0], eps * np.arange(D - 1, 0, -1) / max(D - 1, 1)))
        raw = raw[:D]
    elif kind == "custom":
        if raw is None:
            raise InvalidPreset("custom preset needs raw weights")
        raw = np.asarray(raw, dtype=np.float64)
        if raw.size != D:
            raise InvalidPreset(f"raw weights have length {raw.size}, expected {D}")
    else:
        raise InvalidPreset(f"unknown preset kind {kind!r}")
    if np.any(raw <= 0) or np.any(np.diff(raw) >= 0):
        raise InvalidPreset("preset produced weights that are not strictly decreasing positive")
    return GgfWeights(raw / raw.sum())


def weights_from_name(name: str, D: int) -> GgfWeights:
    """Resolve the string ids used in configs: geo2, geo10, utilitarian,
    maxmin, or custom:[w1,...]."""
    if name.startswith("geo"):
        try:
            base = float(name[3:])
        except ValueError as e:
            raise InvalidPreset(f"bad geometric preset {name!r}") from e
        return make_weights("geometric", D, base=base)
    if name == "utilitarian":
        return make_weights("utilitarian_eps", D)
    if name == "maxmin":
        return make_weights("maxmin_eps", D)
    if name.startswith("custom:"):
        body = name[len("custom:") :].strip("[]() ")
        raw = [float(t) for t in body.replace(",", " ").split()]
        return make_weights("custom", len(raw), raw=raw)
    raise InvalidPreset(f"unknown weight preset {name!r}")


def check_pigou_dalton(weights: GgfWeights, v, i: int, j: int, eps: float) -> bool:
    """True iff transferring eps from component i to worse-off j raises welfare."""
    v = np.asarray(v, dtype=np.float64)
    if not v[i] > v[j]:
        raise InvalidTransfer(f"component {i} must be strictly better off than {j}")
    if not 0 < eps < v[i] - v[j]:
        raise InvalidTransfer(f"eps must lie in (0, {v[i] - v[j]}), got {eps}")
    shifted = v.copy()
    shifted[i] -= eps
    shifted[j] += eps
    return ggf(weights, shifted) > ggf(weights, v)
