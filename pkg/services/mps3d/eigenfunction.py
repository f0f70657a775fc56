"""Evaluation of u = sum_j alpha_j psi_j and of its boundary normal derivative."""

import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from services.core.exceptions import GeometryError
from services.core.factories import BasisFactory
from services.core.interfaces import CylindricalPoints
from services.geometry import QuadratureRule, ShapeCoefficients, surface_quadrature, volume_quadrature
from services.mps3d.solver import EigenSolveResult

logger = logging.getLogger(__name__)

# Points per block when combining basis columns
EVAL_CHUNK = 4096


def _local_points(result: EigenSolveResult, points: np.ndarray) -> CylindricalPoints:
    return CylindricalPoints.from_cartesian(points - result.center[None, :])


def _chunks(points: np.ndarray):
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    for start in range(0, points.shape[0], EVAL_CHUNK):
        yield points[start : start + EVAL_CHUNK]


def eigenfunction_eval(result: EigenSolveResult, points: np.ndarray) -> np.ndarray:
    """u(x) at Cartesian points, in the frame of the shape (not the centered frame)."""
    family = BasisFactory.create_family(result.basis)
    coefficients = result.coefficients
    blocks = [
        family.evaluate(
            result.l_values, result.p_values, result.lam, result.b_field,
            _local_points(result, block),
        )
        @ coefficients
        for block in _chunks(points)
    ]
    return np.concatenate(blocks) if blocks else np.zeros(0, dtype=complex)


def eigenfunction_gradient(result: EigenSolveResult, points: np.ndarray) -> np.ndarray:
    """Cartesian gradient of u; shape (n_points, 3)."""
    family = BasisFactory.create_family(result.basis)
    coefficients = result.coefficients
    blocks = [
        np.einsum(
            "ijk,j->ik",
            family.gradient(
                result.l_values, result.p_values, result.lam, result.b_field,
                _local_points(result, block),
            ),
            coefficients,
        )
        for block in _chunks(points)
    ]
    return np.concatenate(blocks) if blocks else np.zeros((0, 3), dtype=complex)


def l2_normalize(
    result: EigenSolveResult, quadrature: Optional[QuadratureRule] = None
) -> EigenSolveResult:
    """Rescale u so that its L2 norm over the domain is one."""
    rule = quadrature or volume_quadrature(result.shape)
    density = np.abs(eigenfunction_eval(result, rule.points)) ** 2
    norm_sq = float(rule.integrate(density))
    if not norm_sq > 0:
        raise GeometryError("eigenfunction has zero norm on the quadrature", details={"lambda": result.lam})
    return replace(result, scale=result.scale / np.sqrt(norm_sq))


@dataclass(frozen=True)
class NormalDerivative:
    """|du/dn|^2 and |grad u|^2 at the boundary quadrature nodes.

    ``discrepancy`` is the relative L2(boundary) difference of the two, which
    vanishes when u is exactly zero on the boundary.
    """

    values: np.ndarray
    full_gradient: np.ndarray
    discrepancy: float
    quadrature: QuadratureRule


def normal_derivative(
    result: EigenSolveResult, quadrature: Optional[QuadratureRule] = None
) -> NormalDerivative:
    """|n . grad u|^2 at every node of a boundary quadrature.

    Raises:
        GeometryError: If the quadrature carries no outward normals
    """
    if quadrature is None:
        if not isinstance(result.shape, ShapeCoefficients):
            raise GeometryError("boundary quadrature needs a harmonic shape")
        quadrature = surface_quadrature(result.shape)
    if quadrature.normals is None:
        raise GeometryError("boundary quadrature carries no normals")

    grad = eigenfunction_gradient(result, quadrature.points)
    normal_part = np.abs(np.einsum("ik,ik->i", grad, quadrature.normals)) ** 2
    full = np.sum(np.abs(grad) ** 2, axis=1)
    w = quadrature.physical_weights
    full_norm = float(np.sqrt(w @ full**2))
    discrepancy = float(np.sqrt(w @ (full - normal_part) ** 2)) / full_norm if full_norm > 0 else 0.0
    if discrepancy > 1e-3:
        logger.info("Tangential gradient share on the boundary: %.3e", discrepancy)
    return NormalDerivative(
        values=normal_part, full_gradient=full, discrepancy=discrepancy, quadrature=quadrature
    )
