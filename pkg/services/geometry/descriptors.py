"""Sampled geometric descriptors of star-shaped domains.

All quantities are suprema over a dense boundary sample and feed diagnostics
only: height h, projected diameter R of the shadow on the (x, y) plane,
diameter, inradius, and a sampled convexity certificate.
"""

import logging
import math
from functools import lru_cache
from typing import NamedTuple, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, cKDTree
from scipy.spatial.distance import cdist, pdist

from services.core.constants import DESCRIPTOR_GRID
from services.core.exceptions import GeometryError
from services.geometry.measures import volume
from services.geometry.shape import ShapeCoefficients, StarShapedDomain, surface_frame

logger = logging.getLogger(__name__)

CHUNK = 512
CONVEXITY_GRID = (41, 80)
INRADIUS_LATTICE = 13


class Descriptors(NamedTuple):
    h: float
    R: float
    diam: float
    r_in: float

    def to_dict(self):
        return {"h": self.h, "R": self.R, "diam": self.diam, "r_in": self.r_in}


class InradiusDiameterCheck(NamedTuple):
    convex: bool
    holds: bool
    volume: float
    bound: float


@lru_cache(maxsize=4)
def _sample_angles(n_theta: int, n_phi: int) -> Tuple[np.ndarray, np.ndarray]:
    """Latitude-longitude grid with each pole listed once."""
    inner = np.linspace(0.0, math.pi, n_theta)[1:-1]
    phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    t, p = np.meshgrid(inner, phi, indexing="ij")
    theta = np.concatenate([[0.0], t.ravel(), [math.pi]])
    phis = np.concatenate([[0.0], p.ravel(), [0.0]])
    return theta, phis


def boundary_sample(c: StarShapedDomain, grid: Tuple[int, int] = DESCRIPTOR_GRID) -> np.ndarray:
    theta, phi = _sample_angles(*grid)
    return c.surface_point(theta, phi)


def height(c: StarShapedDomain, grid: Tuple[int, int] = DESCRIPTOR_GRID) -> float:
    """h(Omega) = sup |x3 - y3|."""
    return float(np.ptp(boundary_sample(c, grid)[:, 2]))


def _max_pairwise(points: np.ndarray) -> float:
    if len(points) <= 2048:
        return float(pdist(points).max())
    best = 0.0
    for start in range(0, len(points), CHUNK):
        best = max(best, float(cdist(points[start:start + CHUNK], points).max()))
    return best


def _hull_vertices(points: np.ndarray) -> np.ndarray:
    try:
        return points[ConvexHull(points).vertices]
    except Exception as exc:
        raise GeometryError(f"convex hull of the boundary sample failed: {exc}") from exc


def projected_diameter(sample: np.ndarray) -> float:
    """Diameter of the shadow of the domain on the plane orthogonal to the field."""
    return _max_pairwise(_hull_vertices(sample[:, :2]))


def diameter(sample: np.ndarray) -> float:
    return _max_pairwise(_hull_vertices(sample))


def inradius(c: StarShapedDomain, sample: np.ndarray) -> float:
    """Largest distance from an interior point to the sampled boundary.

    Candidates are the z-axis and a coarse lattice over the bounding box; the
    best candidate is refined by Nelder-Mead.
    """
    tree = cKDTree(sample)
    lo, hi = sample.min(axis=0), sample.max(axis=0)
    axis_z = np.linspace(lo[2], hi[2], 4 * INRADIUS_LATTICE)
    axis = np.stack([np.zeros_like(axis_z), np.zeros_like(axis_z), axis_z], axis=-1)
    grids = [np.linspace(lo[k], hi[k], INRADIUS_LATTICE + 2)[1:-1] for k in range(3)]
    lattice = np.stack(np.meshgrid(*grids, indexing="ij"), axis=-1).reshape(-1, 3)
    candidates = np.vstack([axis, lattice])
    candidates = candidates[c.contains(candidates)]
    if len(candidates) == 0:
        raise GeometryError("no interior candidate found for the inradius search")

    distances, _ = tree.query(candidates)
    start = candidates[int(np.argmax(distances))]

    def negative_distance(x: np.ndarray) -> float:
        if not c.contains(x[None, :])[0]:
            return 0.0
        return -float(tree.query(x)[0])

    refined = minimize(negative_distance, start, method="Nelder-Mead", options={"xatol": 1e-6, "fatol": 1e-9})
    return max(float(distances.max()), -float(refined.fun))


def descriptors(c: StarShapedDomain, grid: Tuple[int, int] = DESCRIPTOR_GRID) -> Descriptors:
    sample = boundary_sample(c, grid)
    result = Descriptors(
        h=float(np.ptp(sample[:, 2])),
        R=projected_diameter(sample),
        diam=diameter(sample),
        r_in=inradius(c, sample),
    )
    logger.debug("Descriptors: %s", result)
    return result


def is_convex_sampled(
    c: ShapeCoefficients, grid: Tuple[int, int] = CONVEXITY_GRID, tol: float = 1e-9
) -> bool:
    """True when every sampled boundary point lies on the inner side of every sampled tangent plane."""
    n_theta, n_phi = grid
    theta = np.linspace(0.0, math.pi, n_theta)[1:-1]
    phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    t, p = np.meshgrid(theta, phi, indexing="ij")
    t, p = t.ravel(), p.ravel()
    points = c.surface_point(t, p)
    normals, _ = surface_frame(c, t, p)
    scale = float(np.max(np.linalg.norm(points, axis=1)))
    offsets = np.einsum("ij,ij->i", normals, points)
    for start in range(0, len(points), CHUNK):
        block = normals[start:start + CHUNK] @ points.T - offsets[start:start + CHUNK, None]
        if float(block.max()) > tol * scale:
            return False
    return True


def inradius_diameter_check(c: ShapeCoefficients) -> InradiusDiameterCheck:
    """|Omega| >= (pi/3) r_in^2 diam, meaningful only for convex domains."""
    d = descriptors(c)
    vol = volume(c)
    bound = math.pi / 3.0 * d.r_in**2 * d.diam
    convex = is_convex_sampled(c)
    holds = vol >= bound
    if convex and not holds:
        logger.warning(
            "Inradius-diameter inequality violated on a sampled-convex shape: %.6g < %.6g",
            vol,
            bound,
        )
    return InradiusDiameterCheck(convex=convex, holds=holds, volume=vol, bound=bound)
