"""Spectral solver for the time-fractional Benjamin-Bona-Mahony-Burgers equation
on the unit square, built on shifted Gegenbauer-Gauss collocation."""

from .assembly import (
    DiscreteSolution,
    DiscreteSystem,
    GridOrdering,
    ProblemSpec,
    assemble,
    compute_aae,
    evaluate_on_mesh,
    jacobian,
    reconstruct,
    residual,
)
from .basis import BasisParams, NodeSet, build_node_set, interpolate
from .opmatrices import OperatorBundle, build_operator_bundle
from .problems import get_problem, register_problems
from .solver import SolverConfig, SolveReport, newton_solve, solve, trust_region_solve

__all__ = [
    "BasisParams",
    "NodeSet",
    "build_node_set",
    "interpolate",
    "OperatorBundle",
    "build_operator_bundle",
    "ProblemSpec",
    "GridOrdering",
    "DiscreteSystem",
    "DiscreteSolution",
    "assemble",
    "residual",
    "jacobian",
    "reconstruct",
    "evaluate_on_mesh",
    "compute_aae",
    "SolverConfig",
    "SolveReport",
    "newton_solve",
    "trust_region_solve",
    "solve",
    "get_problem",
    "register_problems",
]

__version__ = "0.1.0"
