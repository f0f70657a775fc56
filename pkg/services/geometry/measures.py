"""Surface and volume quadrature, volumes and their coefficient gradients.

Angular integrals use Gauss-Legendre nodes in cos(theta) and the periodic
trapezoid rule in phi. Volume rules add Gauss-Legendre nodes along each ray,
rho = s * r(theta, phi) with s in [0, 1].
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from services.core.constants import QUAD_N_PHI, QUAD_N_RADIAL, QUAD_N_THETA
from services.core.exceptions import GeometryError
from services.geometry.shape import (
    CylinderDomain,
    ShapeCoefficients,
    StarShapedDomain,
    surface_frame,
    unit_direction,
)


@dataclass(frozen=True)
class QuadratureRule:
    """Quadrature nodes over a shape.

    ``weights`` are the reference weights: they sum to 4*pi over (cos theta, phi)
    for surface rules and over (cos theta, phi, s) for spherical volume rules.
    ``jacobian`` converts them to physical measure, so that sum(weights *
    jacobian * f) integrates f over the boundary (surface) or the domain
    (volume).
    """

    kind: str
    theta: np.ndarray
    phi: np.ndarray
    weights: np.ndarray
    jacobian: np.ndarray
    points: np.ndarray
    rho: Optional[np.ndarray] = None
    normals: Optional[np.ndarray] = None

    @property
    def physical_weights(self) -> np.ndarray:
        return self.weights * self.jacobian

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Integrate along the last axis of ``values``."""
        return np.asarray(values) @ self.physical_weights

    def __len__(self) -> int:
        return int(self.weights.size)


@lru_cache(maxsize=16)
def _angular_rule(
    n_theta: int, n_phi: int, axisymmetric: bool
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)
    if axisymmetric:
        return theta, np.zeros_like(theta), wx * 2.0 * math.pi
    phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    t, p = np.meshgrid(theta, phi, indexing="ij")
    w = np.outer(wx, np.full(n_phi, 2.0 * math.pi / n_phi))
    return t.ravel(), p.ravel(), w.ravel()


def surface_quadrature(
    c: ShapeCoefficients, n_theta: int = QUAD_N_THETA, n_phi: int = QUAD_N_PHI
) -> QuadratureRule:
    """Boundary rule with normals; axisymmetric shapes collapse the phi direction."""
    if not isinstance(c, ShapeCoefficients):
        raise GeometryError("surface quadrature needs a harmonic shape description")
    theta, phi, weights = _angular_rule(n_theta, n_phi, c.axisymmetric)
    normals, area = surface_frame(c, theta, phi)
    r = c.radius(theta, phi)
    if np.any(r <= 0):
        raise GeometryError("non-positive radius at a quadrature node")
    return QuadratureRule(
        kind="surface",
        theta=theta,
        phi=phi,
        weights=weights,
        jacobian=area / np.sin(theta),
        points=r[:, None] * unit_direction(theta, phi),
        normals=normals,
    )


def volume_quadrature(
    c: StarShapedDomain,
    n_theta: int = QUAD_N_THETA,
    n_phi: int = QUAD_N_PHI,
    n_radial: int = QUAD_N_RADIAL,
) -> QuadratureRule:
    """Tensor rule over the domain.

    Star-shaped harmonic domains use the spherical (theta, phi, s) rule; exact
    cylinders use a cylindrical (r, phi, z) tensor rule, which is exact in phi
    and spectrally accurate in r and z.
    """
    if isinstance(c, CylinderDomain):
        return _cylinder_volume_rule(c, n_theta, n_phi, n_radial)

    theta, phi, ang_w = _angular_rule(n_theta, n_phi, c.axisymmetric)
    s, ws = np.polynomial.legendre.leggauss(n_radial)
    s = 0.5 * (s + 1.0)
    ws = 0.5 * ws
    r = np.asarray(c.radius(theta, phi))

    rho = np.outer(r, s)
    weights = np.outer(ang_w, ws).ravel()
    jacobian = (r[:, None] ** 3 * s[None, :] ** 2).ravel()
    directions = unit_direction(theta, phi)
    points = (rho[:, :, None] * directions[:, None, :]).reshape(-1, 3)
    return QuadratureRule(
        kind="volume",
        theta=np.repeat(theta, n_radial),
        phi=np.repeat(phi, n_radial),
        weights=weights,
        jacobian=jacobian,
        points=points,
        rho=rho.ravel(),
    )


def _cylinder_volume_rule(
    c: CylinderDomain, n_z: int, n_phi: int, n_r: int
) -> QuadratureRule:
    t, wt = np.polynomial.legendre.leggauss(n_r)
    radial = 0.5 * c.R * (t + 1.0)
    w_radial = 0.5 * c.R * wt * radial
    zz, wz = np.polynomial.legendre.leggauss(n_z)
    z = 0.5 * c.h * zz
    w_z = 0.5 * c.h * wz
    if c.axisymmetric:
        phi = np.zeros(1)
        w_phi = np.array([2.0 * math.pi])
    else:
        phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
        w_phi = np.full(n_phi, 2.0 * math.pi / n_phi)

    rr, pp, zv = np.meshgrid(radial, phi, z, indexing="ij")
    weights = np.einsum("i,j,k->ijk", w_radial, w_phi, w_z).ravel()
    points = np.stack(
        [(rr * np.cos(pp)).ravel(), (rr * np.sin(pp)).ravel(), zv.ravel()], axis=-1
    )
    rho = np.linalg.norm(points, axis=1)
    theta = np.arccos(np.clip(points[:, 2] / np.where(rho > 0, rho, 1.0), -1.0, 1.0))
    return QuadratureRule(
        kind="volume",
        theta=theta,
        phi=pp.ravel(),
        weights=weights,
        jacobian=np.ones_like(weights),
        points=points,
        rho=rho,
    )


def volume(c: StarShapedDomain, n_theta: int = QUAD_N_THETA, n_phi: int = QUAD_N_PHI) -> float:
    """|Omega| = (1/3) int r^3 dcos(theta) dphi."""
    if isinstance(c, CylinderDomain):
        return c.volume
    theta, phi, weights = _angular_rule(n_theta, n_phi, c.axisymmetric)
    r = np.asarray(c.radius(theta, phi))
    return float(weights @ r**3) / 3.0


def volume_gradient(
    c: ShapeCoefficients, n_theta: int = QUAD_N_THETA, n_phi: int = QUAD_N_PHI
) -> np.ndarray:
    """d|Omega|/dc_i = int r^2 Ỹ_i dcos(theta) dphi."""
    theta, phi, weights = _angular_rule(n_theta, n_phi, c.axisymmetric)
    harmonics = c.harmonics(theta, phi)
    r = np.tensordot(c.coeffs, harmonics, axes=1)
    return harmonics @ (weights * r**2)


def surface_area(c: ShapeCoefficients, n_theta: int = QUAD_N_THETA, n_phi: int = QUAD_N_PHI) -> float:
    rule = surface_quadrature(c, n_theta, n_phi)
    return float(rule.physical_weights.sum())


def centroid(c: StarShapedDomain) -> np.ndarray:
    """Centre of mass of the domain."""
    if isinstance(c, CylinderDomain):
        return np.zeros(3)
    rule = volume_quadrature(c, n_radial=24)
    w = rule.physical_weights
    return (rule.points * w[:, None]).sum(axis=0) / w.sum()


def normalize_unit_volume(c: ShapeCoefficients) -> ShapeCoefficients:
    """Rescale coefficients so that the domain has unit volume."""
    return c.scaled(volume(c) ** (-1.0 / 3.0))
