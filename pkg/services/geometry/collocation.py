"""Boundary collocation angles and interior sample points."""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import qmc

from services.core.constants import INTERIOR_RHO_RANGE
from services.core.exceptions import GeometryError
from services.geometry.shape import StarShapedDomain, unit_direction

logger = logging.getLogger(__name__)

MIN_TARGET = 16


@dataclass(frozen=True)
class CollocationSet:
    """Collocation angles and the matching boundary points gamma(theta, phi)."""

    theta: np.ndarray
    phi: np.ndarray
    points: np.ndarray
    target_count: int
    n_theta: int

    @property
    def angles(self) -> np.ndarray:
        return np.stack([self.theta, self.phi], axis=-1)

    def __len__(self) -> int:
        return int(self.theta.size)


def theta_count(n_target: int) -> int:
    """n_theta = ceil(sqrt(pi * n_target) / 2)."""
    return int(math.ceil(0.5 * math.sqrt(math.pi * n_target)))


def collocation_angles(
    c: StarShapedDomain,
    n_target: int,
    axisymmetric: Optional[bool] = None,
    offset: float = 0.0,
) -> CollocationSet:
    """Latitude rings with roughly equal spacing, or a single meridian.

    General mode places n_theta + 1 equidistant latitudes; the poles get one
    point each and latitude j gets floor(2 n_theta sin(theta_j)) equally spaced
    longitudes. The axisymmetric variant takes ``n_target`` as n_theta and
    returns the n_theta + 1 meridian points at phi = 0.

    A non-zero ``offset`` in (0, 1) shifts every latitude and longitude by that
    share of its spacing and leaves out the poles. The shifted set shares no
    point with the unshifted one and is used to re-check accepted solves.
    """
    if not 0.0 <= offset < 1.0:
        raise GeometryError(f"collocation offset must lie in [0, 1), got {offset}")
    if n_target < MIN_TARGET:
        raise GeometryError(
            f"collocation target must be at least {MIN_TARGET}, got {n_target}"
        )
    if axisymmetric is None:
        axisymmetric = bool(getattr(c, "axisymmetric", False))

    if axisymmetric:
        n_theta = int(n_target)
        if offset:
            theta = math.pi * (np.arange(n_theta) + offset) / n_theta
        else:
            theta = math.pi * np.arange(n_theta + 1) / n_theta
        phi = np.zeros_like(theta)
    else:
        n_theta = theta_count(n_target)
        thetas, phis = [], []
        for j in range(n_theta if offset else n_theta + 1):
            theta_j = math.pi * (j + offset) / n_theta
            if not offset and j in (0, n_theta):
                n_phi = 1
            else:
                n_phi = max(1, int(math.floor(2 * n_theta * math.sin(theta_j))))
            thetas.append(np.full(n_phi, theta_j))
            phis.append(2.0 * math.pi * (np.arange(n_phi) + offset) / n_phi)
        theta = np.concatenate(thetas)
        phi = np.concatenate(phis)

    points = c.surface_point(theta, phi)
    logger.debug(
        "Collocation set: %d points, n_theta=%d, target=%d", theta.size, n_theta, n_target
    )
    return CollocationSet(
        theta=theta, phi=phi, points=points, target_count=n_target, n_theta=n_theta
    )


def interior_points(
    c: StarShapedDomain,
    count: int,
    seed: int = 0,
    axisymmetric: Optional[bool] = None,
) -> np.ndarray:
    """Scrambled Halton samples strictly inside the domain.

    Directions are uniform on the sphere, radial positions lie in
    [0.2, 0.9] * r(theta, phi). Axisymmetric domains are sampled in the
    phi = 0 half-plane only.
    """
    if count < 1:
        raise GeometryError("interior point count must be positive")
    if axisymmetric is None:
        axisymmetric = bool(getattr(c, "axisymmetric", False))
    lo, hi = INTERIOR_RHO_RANGE
    sampler = qmc.Halton(d=3, scramble=True, seed=seed)
    u = sampler.random(count)
    theta = np.arccos(1.0 - 2.0 * u[:, 0])
    phi = np.zeros(count) if axisymmetric else 2.0 * math.pi * u[:, 1]
    rho = (lo + (hi - lo) * u[:, 2]) * np.asarray(c.radius(theta, phi))
    return rho[:, None] * unit_direction(theta, phi)
