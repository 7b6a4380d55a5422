"""Contour-integral solver for nonlinear eigenvalue problems T(z) v = 0."""
from .contour import Contour, QuadratureNodes, contains, nodes
from .matfunc import (
    DomainError,
    NonlinearMatrixFunction,
    PolynomialMatrixFunction,
    linear_problem,
    make_gallery_problem,
)
from .moments import MomentSet, NodeFailure, ProbeMatrix, apply_shift, compute_moments
from .oracle import companion_pencil, newton_refine, polyeig_oracle, scalar_pole_error
from .solver import (
    EigenResult,
    RankGapNotFound,
    SolverConfig,
    build_hankel_pencil,
    extract_eigenpairs,
    rank_test,
    reduce,
    solve,
)

__all__ = [
    "Contour", "QuadratureNodes", "contains", "nodes",
    "DomainError", "NonlinearMatrixFunction", "PolynomialMatrixFunction",
    "linear_problem", "make_gallery_problem",
    "MomentSet", "NodeFailure", "ProbeMatrix", "apply_shift", "compute_moments",
    "companion_pencil", "newton_refine", "polyeig_oracle", "scalar_pole_error",
    "EigenResult", "RankGapNotFound", "SolverConfig", "build_hankel_pencil",
    "extract_eigenpairs", "rank_test", "reduce", "solve",
]
