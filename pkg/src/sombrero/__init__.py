"""Ground state of the N-dimensional sombrero double well.

Public surface: problem definition (:mod:`sombrero.model`), the closed-form
trial state (:mod:`sombrero.trialfn`), grid and quadrature
(:mod:`sombrero.numerics`), the convergent iteration
(:mod:`sombrero.iteration`), and an independent finite-difference eigensolver
(:mod:`sombrero.oracle`).  ``sombrero.kernels.BACKEND`` tells whether the
compiled scan kernels or the pure fallback are active.
"""
from .iteration import SolverReport, delta_step, f_step, iterate, solve
from .kernels import BACKEND
from .model import ModelParams, exact_ground_state, operator_residual, potential
from .numerics import RadialGrid, build_grid, weighted_integral
from .oracle import ground_energy, ground_energy_richardson, psi_from_u
from .trialfn import TrialConfig, TrialFunction, build_trial

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ModelParams",
    "RadialGrid",
    "SolverReport",
    "TrialConfig",
    "TrialFunction",
    "build_grid",
    "build_trial",
    "delta_step",
    "exact_ground_state",
    "f_step",
    "ground_energy",
    "ground_energy_richardson",
    "iterate",
    "operator_residual",
    "potential",
    "psi_from_u",
    "solve",
    "weighted_integral",
    "__version__",
]
