"""Collocation matrix and the subspace-angle measure sigma(lambda)."""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import qr, solve_triangular, svd

from services.core.constants import RANK_TOL
from services.core.exceptions import ConditioningError, ConfigError
from services.core.interfaces import CylindricalPoints, IBasisFamily
from services.geometry.collocation import CollocationSet
from services.mps3d.basis import BasisSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AssembledSystem:
    """Stacked matrix [A_boundary; A_interior] with the columns it was built from."""

    matrix: np.ndarray
    n_boundary: int
    l_values: np.ndarray
    p_values: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape


@dataclass(frozen=True)
class SubspaceAngleResult:
    """Smallest boundary singular value of the orthonormalized column space.

    ``alpha`` are coefficients on the assembled columns such that A alpha has
    the minimal relative boundary norm; they have unit Euclidean norm.
    ``second_alpha`` belongs to the second smallest singular value.
    """

    sigma: float
    second_sigma: float
    alpha: np.ndarray
    rank: int
    l_values: np.ndarray
    p_values: np.ndarray
    second_alpha: Optional[np.ndarray] = None


def basis_columns(
    basis: BasisSpec,
    family: IBasisFamily,
    lam: float,
    b_field: float = 0.0,
    r_max: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Columns usable at lambda; ``r_max`` also drops columns the family cannot resolve."""
    l_values, p_values = basis.columns(lam)
    keep = family.admissible_p(p_values, lam)
    l_values, p_values = l_values[keep], p_values[keep]
    if r_max is not None:
        keep = family.resolvable(l_values, p_values, lam, b_field, r_max)
        l_values, p_values = l_values[keep], p_values[keep]
    return l_values, p_values


def assemble_matrix(
    family: IBasisFamily,
    basis: BasisSpec,
    b_field: float,
    lam: float,
    colloc: CollocationSet,
    interior: np.ndarray,
    center: Optional[np.ndarray] = None,
) -> AssembledSystem:
    """Evaluate every basis column at the boundary and interior points.

    Rows are the collocation points followed by the interior points, shifted by
    ``center`` so the basis is expanded about the domain's centroid. Columns
    follow the lexicographic (l, p) order of the basis, minus wave numbers the
    family rejects at this lambda and columns it cannot resolve over the points.

    Raises:
        ConfigError: If the basis or either point set is empty
    """
    interior = np.asarray(interior, dtype=float).reshape(-1, 3)
    if len(colloc) == 0 or interior.shape[0] == 0:
        raise ConfigError("assembly needs non-empty boundary and interior point sets")
    points = np.vstack([colloc.points, interior])
    if center is not None:
        points = points - np.asarray(center, dtype=float)[None, :]
    cylindrical = CylindricalPoints.from_cartesian(points)
    l_values, p_values = basis_columns(
        basis, family, lam, b_field, float(np.max(cylindrical.r))
    )
    if l_values.size == 0:
        raise ConfigError("no admissible basis columns", details={"lambda": lam})
    matrix = family.evaluate(l_values, p_values, lam, b_field, cylindrical)
    return AssembledSystem(
        matrix=matrix, n_boundary=len(colloc), l_values=l_values, p_values=p_values
    )


def subspace_angle(system: AssembledSystem) -> SubspaceAngleResult:
    """QR of the column-normalized matrix, then the SVD of the boundary block of Q.

    Raises:
        ConditioningError: If fewer than two columns are numerically independent
    """
    matrix = system.matrix
    if not np.all(np.isfinite(matrix)):
        raise ConditioningError(
            "basis matrix contains non-finite entries",
            details={"shape": list(matrix.shape)},
        )
    norms = np.linalg.norm(matrix, axis=0)
    live = norms > 0
    if np.count_nonzero(live) < 2:
        raise ConditioningError(
            "fewer than two non-zero basis columns", details={"columns": int(live.sum())}
        )
    normalized = matrix[:, live] / norms[live]

    q, r, perm = qr(normalized, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    rank = int(np.count_nonzero(diag > RANK_TOL * diag[0]))
    if rank < 2:
        raise ConditioningError(
            "basis matrix is numerically rank deficient",
            details={"rank": rank, "columns": int(normalized.shape[1]), "r00": float(diag[0])},
        )

    _, s, vh = svd(q[: system.n_boundary, :rank], full_matrices=False)
    sigma = float(s[-1])
    second = float(s[-2]) if s.size > 1 else 1.0

    def coefficients(right_vector: np.ndarray) -> np.ndarray:
        y = solve_triangular(r[:rank, :rank], right_vector.conj())
        alpha_live = np.zeros(normalized.shape[1], dtype=complex)
        alpha_live[perm[:rank]] = y
        alpha = np.zeros(matrix.shape[1], dtype=complex)
        alpha[live] = alpha_live / norms[live]
        return alpha / np.linalg.norm(alpha)

    return SubspaceAngleResult(
        sigma=min(max(sigma, 0.0), 1.0),
        second_sigma=min(max(second, 0.0), 1.0),
        alpha=coefficients(vh[-1]),
        rank=rank,
        l_values=system.l_values,
        p_values=system.p_values,
        second_alpha=coefficients(vh[-2]) if s.size > 1 else None,
    )
