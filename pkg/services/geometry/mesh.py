"""Triangle meshes of the boundary for OBJ export."""

import math
from typing import Tuple

import numpy as np

from services.core.exceptions import GeometryError
from services.geometry.shape import StarShapedDomain


def mesh_grid(
    c: StarShapedDomain, n_theta: int = 61, n_phi: int = 120
) -> Tuple[np.ndarray, np.ndarray]:
    """Vertices and outward-oriented triangles from a (theta, phi) grid.

    The poles are single vertices joined to the neighbouring ring by a fan,
    every other grid quad is split into two triangles. Faces index vertices
    from zero.
    """
    if n_theta < 3 or n_phi < 3:
        raise GeometryError("mesh grid needs at least 3 latitudes and 3 longitudes")
    theta = np.linspace(0.0, math.pi, n_theta)[1:-1]
    phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    t, p = np.meshgrid(theta, phi, indexing="ij")
    rings = c.surface_point(t.ravel(), p.ravel())
    north = c.surface_point(np.array([0.0]), np.array([0.0]))
    south = c.surface_point(np.array([math.pi]), np.array([0.0]))
    vertices = np.vstack([north, rings, south])

    n_rings = theta.size
    south_index = 1 + n_rings * n_phi

    def ring(j: int, k: int) -> int:
        return 1 + j * n_phi + (k % n_phi)

    faces = []
    for k in range(n_phi):
        faces.append((0, ring(0, k), ring(0, k + 1)))
    for j in range(n_rings - 1):
        for k in range(n_phi):
            a, b = ring(j, k), ring(j, k + 1)
            c_, d = ring(j + 1, k), ring(j + 1, k + 1)
            faces.append((a, c_, b))
            faces.append((b, c_, d))
    for k in range(n_phi):
        faces.append((ring(n_rings - 1, k), south_index, ring(n_rings - 1, k + 1)))
    return vertices, np.asarray(faces, dtype=int)
