"""Method of particular solutions for the magnetic Dirichlet Laplacian in 3D."""

from services.mps3d.assembly import (
    AssembledSystem,
    SubspaceAngleResult,
    assemble_matrix,
    basis_columns,
    subspace_angle,
)
from services.mps3d.basis import (
    BasisSpec,
    BesselBasis,
    KummerBasis,
    bessel_basis,
    particular_solution,
    particular_solution_gradient,
)
from services.mps3d.eigenfunction import (
    NormalDerivative,
    eigenfunction_eval,
    eigenfunction_gradient,
    l2_normalize,
    normal_derivative,
)
from services.mps3d.solver import (
    CollocationProblem,
    EigenSolveResult,
    SolverOptions,
    default_basis,
    default_window,
    find_eigenvalue,
    lemma_floor,
    sigma_curve,
)

__all__ = [
    "AssembledSystem",
    "BasisSpec",
    "BesselBasis",
    "CollocationProblem",
    "EigenSolveResult",
    "KummerBasis",
    "NormalDerivative",
    "SolverOptions",
    "SubspaceAngleResult",
    "assemble_matrix",
    "basis_columns",
    "bessel_basis",
    "default_basis",
    "default_window",
    "eigenfunction_eval",
    "eigenfunction_gradient",
    "find_eigenvalue",
    "l2_normalize",
    "lemma_floor",
    "normal_derivative",
    "particular_solution",
    "particular_solution_gradient",
    "sigma_curve",
    "subspace_angle",
]
