"""Star-shaped domains described by a radius function r(theta, phi).

``ShapeCoefficients`` is the optimizer's decision variable: r = c . Ỹ(theta, phi)
with real spherical harmonics up to l_max (or zonal harmonics only when the
shape is axisymmetric). ``CylinderDomain`` is an exact circular cylinder used as
an independent test domain for the eigenvalue solver.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from services.core.constants import ADMISSIBILITY_GRID, DEFAULT_CYLINDER_FIT_L_MAX
from services.core.exceptions import ConfigError, GeometryError, InadmissibleShapeError
from services.specfun import (
    harmonic_count,
    harmonic_index,
    real_sph_harm_all,
    real_sph_harm_all_derivatives,
    zonal_harm_all,
)

logger = logging.getLogger(__name__)

SQRT_4PI = math.sqrt(4.0 * math.pi)


class StarShapedDomain(ABC):
    """A domain whose boundary is {r(theta, phi) * e_r} for a positive radius function."""

    axisymmetric: bool

    @abstractmethod
    def radius(self, theta, phi) -> np.ndarray:
        """Radius function evaluated with broadcasting."""

    def surface_point(self, theta, phi) -> np.ndarray:
        theta, phi = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
        )
        r = np.asarray(self.radius(theta, phi))
        return r[..., None] * unit_direction(theta, phi)

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Boolean mask of points strictly inside the domain."""
        points = np.asarray(points, dtype=float).reshape(-1, 3)
        rho = np.linalg.norm(points, axis=1)
        theta = np.arccos(np.clip(points[:, 2] / np.where(rho > 0, rho, 1.0), -1.0, 1.0))
        phi = np.arctan2(points[:, 1], points[:, 0])
        return rho < np.asarray(self.radius(theta, phi))

    def max_radius(self) -> float:
        theta, phi = _admissibility_grid(self.axisymmetric)
        return float(np.max(self.radius(theta, phi)))


def unit_direction(theta, phi) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    sin_t = np.sin(theta)
    return np.stack(
        np.broadcast_arrays(sin_t * np.cos(phi), sin_t * np.sin(phi), np.cos(theta)),
        axis=-1,
    )


@lru_cache(maxsize=2)
def _admissibility_grid(axisymmetric: bool) -> Tuple[np.ndarray, np.ndarray]:
    n_theta, n_phi = ADMISSIBILITY_GRID
    theta = np.linspace(0.0, math.pi, n_theta)
    if axisymmetric:
        return theta, np.zeros_like(theta)
    phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    t, p = np.meshgrid(theta, phi, indexing="ij")
    return t.ravel(), p.ravel()


@lru_cache(maxsize=4)
def _admissibility_basis(l_max: int, axisymmetric: bool) -> np.ndarray:
    theta, phi = _admissibility_grid(axisymmetric)
    if axisymmetric:
        return zonal_harm_all(l_max, theta)[0]
    return real_sph_harm_all(l_max, theta, phi)


@dataclass(frozen=True, eq=False)
class ShapeCoefficients(StarShapedDomain):
    """Spherical-harmonic coefficients of a star-shaped radius function.

    General shapes hold (l_max+1)^2 coefficients ordered as ``harmonic_index``;
    axisymmetric shapes hold l_max+1 coefficients of the zonal harmonics Ỹ_l^0.
    Construction fails with ``InadmissibleShapeError`` unless r > 0 on a dense
    (theta, phi) grid.
    """

    coeffs: np.ndarray
    l_max: int
    axisymmetric: bool = False

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).reshape(-1)
        if self.l_max < 0:
            raise GeometryError(f"l_max must be non-negative, got {self.l_max}")
        expected = self.l_max + 1 if self.axisymmetric else harmonic_count(self.l_max)
        if coeffs.size != expected:
            raise GeometryError(
                f"expected {expected} coefficients for l_max={self.l_max}, got {coeffs.size}",
                details={"l_max": self.l_max, "axisymmetric": self.axisymmetric},
            )
        if not np.all(np.isfinite(coeffs)):
            raise GeometryError("shape coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        self._check_admissible()

    def _check_admissible(self) -> None:
        r = self.coeffs @ _admissibility_basis(self.l_max, self.axisymmetric)
        r_min = float(np.min(r))
        if r_min <= 0.0:
            raise InadmissibleShapeError(
                "radius function is not positive on the validation grid",
                details={"min_radius": r_min},
            )

    @property
    def n_coeffs(self) -> int:
        return int(self.coeffs.size)

    def harmonics(self, theta, phi) -> np.ndarray:
        """Basis vector Ỹ(theta, phi); shape (n_coeffs, *broadcast shape)."""
        theta, phi = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
        )
        if self.axisymmetric:
            return zonal_harm_all(self.l_max, theta)[0]
        return real_sph_harm_all(self.l_max, theta, phi)

    def harmonics_with_derivatives(
        self, theta, phi
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        theta, phi = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
        )
        if self.axisymmetric:
            values, d_theta = zonal_harm_all(self.l_max, theta)
            return values, d_theta, np.zeros_like(values)
        return real_sph_harm_all_derivatives(self.l_max, theta, phi)

    def radius(self, theta, phi) -> np.ndarray:
        return np.tensordot(self.coeffs, self.harmonics(theta, phi), axes=1)

    def radius_derivatives(
        self, theta, phi
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(r, dr/dtheta, dr/dphi) from term-wise differentiated harmonics."""
        values, d_theta, d_phi = self.harmonics_with_derivatives(theta, phi)
        return (
            np.tensordot(self.coeffs, values, axes=1),
            np.tensordot(self.coeffs, d_theta, axes=1),
            np.tensordot(self.coeffs, d_phi, axes=1),
        )

    def with_coeffs(self, coeffs: np.ndarray) -> "ShapeCoefficients":
        return ShapeCoefficients(coeffs, self.l_max, self.axisymmetric)

    def scaled(self, factor: float) -> "ShapeCoefficients":
        return self.with_coeffs(self.coeffs * factor)

    def to_general(self) -> "ShapeCoefficients":
        """Embed zonal coefficients into the full harmonic vector."""
        if not self.axisymmetric:
            return self
        full = np.zeros(harmonic_count(self.l_max))
        for l in range(self.l_max + 1):
            full[harmonic_index(l, 0)] = self.coeffs[l]
        return ShapeCoefficients(full, self.l_max, axisymmetric=False)

    def to_axisymmetric(self, l_max: Optional[int] = None) -> "ShapeCoefficients":
        """Keep the m = 0 part, optionally re-truncated or zero-padded to l_max."""
        target = self.l_max if l_max is None else l_max
        zonal = np.zeros(target + 1)
        for l in range(min(self.l_max, target) + 1):
            zonal[l] = self.coeffs[l] if self.axisymmetric else self.coeffs[harmonic_index(l, 0)]
        return ShapeCoefficients(zonal, target, axisymmetric=True)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "l_max": self.l_max,
            "axisymmetric": self.axisymmetric,
            "coeffs": [float(v) for v in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ShapeCoefficients":
        unknown = set(data) - {"l_max", "axisymmetric", "coeffs"}
        if unknown:
            raise ConfigError(
                f"unknown keys in shape file: {sorted(unknown)}",
                details={"unknown": sorted(unknown)},
            )
        try:
            return cls(
                coeffs=np.asarray(data["coeffs"], dtype=float),
                l_max=int(data["l_max"]),
                axisymmetric=bool(data.get("axisymmetric", False)),
            )
        except KeyError as exc:
            raise ConfigError(f"shape file is missing key {exc}") from exc


@dataclass(frozen=True, eq=False)
class CylinderDomain(StarShapedDomain):
    """Circular cylinder of radius R and height h centred at the origin, axis along z."""

    R: float
    h: float
    axisymmetric: bool = True

    def __post_init__(self):
        if self.R <= 0 or self.h <= 0:
            raise GeometryError("cylinder radius and height must be positive")

    def radius(self, theta, phi) -> np.ndarray:
        theta, _ = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
        )
        sin_t = np.abs(np.sin(theta))
        cos_t = np.abs(np.cos(theta))
        with np.errstate(divide="ignore"):
            side = np.where(sin_t > 0, self.R / sin_t, np.inf)
            cap = np.where(cos_t > 0, 0.5 * self.h / cos_t, np.inf)
        return np.minimum(side, cap)

    @property
    def volume(self) -> float:
        return math.pi * self.R**2 * self.h


def radius(c: StarShapedDomain, theta, phi) -> np.ndarray:
    return c.radius(theta, phi)


def surface_point(c: StarShapedDomain, theta, phi) -> np.ndarray:
    return c.surface_point(theta, phi)


def surface_frame(c: ShapeCoefficients, theta, phi) -> Tuple[np.ndarray, np.ndarray]:
    """Outward unit normal and area element of the parametrized boundary.

    With w = d_theta(gamma) x d_phi(gamma) = r^2 sin(t) e_r - r r_t sin(t) e_t - r r_p e_p,
    returns n = w/|w| and dsigma = |w| (per dtheta dphi).
    """
    theta, phi = np.broadcast_arrays(
        np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
    )
    r, r_theta, r_phi = c.radius_derivatives(theta, phi)
    sin_t, cos_t = np.sin(theta), np.cos(theta)
    cos_p, sin_p = np.cos(phi), np.sin(phi)

    e_r = np.stack([sin_t * cos_p, sin_t * sin_p, cos_t], axis=-1)
    e_theta = np.stack([cos_t * cos_p, cos_t * sin_p, -sin_t], axis=-1)
    e_phi = np.stack([-sin_p, cos_p, np.zeros_like(phi)], axis=-1)

    w = (
        (r * r * sin_t)[..., None] * e_r
        - (r * r_theta * sin_t)[..., None] * e_theta
        - (r * r_phi)[..., None] * e_phi
    )
    area = np.linalg.norm(w, axis=-1)
    if np.any(area <= 0.0):
        raise GeometryError(
            "degenerate surface frame", details={"min_area": float(np.min(area))}
        )
    return w / area[..., None], area


def ball_shape(
    radius_value: float = 1.0, l_max: int = 0, axisymmetric: bool = False
) -> ShapeCoefficients:
    """Ball of the given radius: only the constant harmonic is non-zero."""
    size = l_max + 1 if axisymmetric else harmonic_count(l_max)
    coeffs = np.zeros(size)
    coeffs[0] = radius_value * SQRT_4PI
    return ShapeCoefficients(coeffs, l_max, axisymmetric)


def unit_volume_ball(l_max: int = 0, axisymmetric: bool = False) -> ShapeCoefficients:
    return ball_shape((3.0 / (4.0 * math.pi)) ** (1.0 / 3.0), l_max, axisymmetric)


def fit_radius_function(
    func: Callable[[np.ndarray, np.ndarray], np.ndarray],
    l_max: int,
    axisymmetric: bool = False,
    n_theta: int = 128,
    n_phi: int = 256,
) -> ShapeCoefficients:
    """Project a radius function onto the harmonic basis by quadrature."""
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)
    if axisymmetric:
        values, _ = zonal_harm_all(l_max, theta)
        r = np.asarray(func(theta, np.zeros_like(theta)))
        coeffs = 2.0 * math.pi * (values * (wx * r)).sum(axis=1)
        return ShapeCoefficients(coeffs, l_max, axisymmetric=True)
    phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    t, p = np.meshgrid(theta, phi, indexing="ij")
    weights = np.outer(wx, np.full(n_phi, 2.0 * math.pi / n_phi))
    values = real_sph_harm_all(l_max, t, p)
    r = np.asarray(func(t, p))
    coeffs = (values * (weights * r)).sum(axis=(1, 2))
    return ShapeCoefficients(coeffs, l_max, axisymmetric=False)


def spheroid_shape(
    aspect: float, l_max: int = 10, axisymmetric: bool = False
) -> ShapeCoefficients:
    """Spheroid with semi-axes (1, 1, aspect) projected onto the harmonic basis.

    aspect > 1 gives a prolate shape elongated along the field axis, aspect < 1 an
    oblate one.
    """

    def spheroid(theta, phi):
        return 1.0 / np.sqrt(np.sin(theta) ** 2 + (np.cos(theta) / aspect) ** 2)

    return fit_radius_function(spheroid, l_max, axisymmetric)


def perturbed_ball(
    l_pert: int,
    amplitude: float,
    seed: int = 0,
    l_max: Optional[int] = None,
    axisymmetric: bool = False,
    radius_value: float = 1.0,
) -> ShapeCoefficients:
    """Ball with random harmonic noise of degree 1..l_pert.

    The noise is scaled so that its root-mean-square over the sphere equals
    ``amplitude * radius_value``.
    """
    l_max = l_pert if l_max is None else l_max
    if l_pert > l_max:
        raise GeometryError("perturbation degree exceeds l_max")
    rng = np.random.default_rng(seed)
    base = ball_shape(radius_value, l_max, axisymmetric)
    coeffs = base.coeffs.copy()
    if axisymmetric:
        positions = list(range(1, l_pert + 1))
    else:
        positions = list(range(1, harmonic_count(l_pert)))
    if not positions:
        return base
    noise = rng.standard_normal(len(positions))
    noise *= amplitude * radius_value * SQRT_4PI / np.linalg.norm(noise)
    coeffs[positions] += noise
    return ShapeCoefficients(coeffs, l_max, axisymmetric)


def prolate_shape(
    aspect: float = 1.5, l_max: int = 10, axisymmetric: bool = False
) -> ShapeCoefficients:
    if aspect <= 1.0:
        raise GeometryError("a prolate shape needs aspect > 1")
    return spheroid_shape(aspect, l_max, axisymmetric)


def oblate_shape(
    aspect: float = 0.7, l_max: int = 10, axisymmetric: bool = False
) -> ShapeCoefficients:
    if not 0.0 < aspect < 1.0:
        raise GeometryError("an oblate shape needs 0 < aspect < 1")
    return spheroid_shape(aspect, l_max, axisymmetric)


def cylinder_like_shape(
    R: float,
    h: float,
    l_max: int = DEFAULT_CYLINDER_FIT_L_MAX,
    axisymmetric: bool = True,
    exponent: float = 8.0,
) -> ShapeCoefficients:
    """Rounded cylinder |rho_perp/R|^q + |2z/h|^q = 1 projected onto the harmonic basis."""
    if R <= 0 or h <= 0:
        raise GeometryError("cylinder radius and height must be positive")

    def superellipse(theta, phi):
        side = np.abs(np.sin(theta)) / R
        cap = np.abs(np.cos(theta)) * 2.0 / h
        return (side**exponent + cap**exponent) ** (-1.0 / exponent)

    return fit_radius_function(superellipse, l_max, axisymmetric)
