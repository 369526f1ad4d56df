"""Numerical substrate: dense LU, spectral radius, simplex LP, PRNG."""

from .linalg import lu_factor, lu_solve, spectral_radius
from .rng import Rng
from .simplex import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    LpResult,
    simplex_solve,
)

__all__ = [
    "lu_factor",
    "lu_solve",
    "spectral_radius",
    "Rng",
    "LinearProgram",
    "LpResult",
    "simplex_solve",
    "OPTIMAL",
    "INFEASIBLE",
    "UNBOUNDED",
]
