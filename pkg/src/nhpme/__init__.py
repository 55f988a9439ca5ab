"""Numerical laboratory for |x|^{-2} u_t = Laplacian(u^m) in dimensions 1 and 2.

Everything is solved in the log variable ``s = log|x|``; see the submodules
``core``, ``transforms``, ``solvers``, ``profiles``, ``metrics`` and the
scenario runner behind the ``nhpme`` command.
"""

from .core import (Bump, DomainError, Field, Grid1D, Plateau, ProblemSpec, ProfileSnapshot,
                   Table, build_initial_field, weighted_mass)
from .kernels import BACKEND_NAME
from .solvers import Dirichlet, SolverConfig, ZeroFlux, solve, solve_radial_direct

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "Bump",
    "Dirichlet",
    "DomainError",
    "Field",
    "Grid1D",
    "Plateau",
    "ProblemSpec",
    "ProfileSnapshot",
    "SolverConfig",
    "Table",
    "ZeroFlux",
    "build_initial_field",
    "solve",
    "solve_radial_direct",
    "weighted_mass",
]
