"""Particular solutions of the magnetic eigenvalue equation in cylindrical coordinates.

With the symmetric gauge A = (B/2)(-y, x, 0) every function

    psi_{l,p}(r, theta, z) = (B/2)^{|l|/2} r^{|l|} e^{-zeta/2} M(a, |l|+1, zeta) e^{il theta} e^{ipz},
    zeta = B r^2 / 2,  a = (l + |l| + 1 - (lambda - p^2)/B) / 2,

solves (-i grad + A)^2 psi = lambda psi. The prefactor equals zeta^{|l|/2}, so
this is the usual form written with the radial argument kept explicit. For
vanishing field the family degenerates to J_{|l|}(sqrt(lambda - p^2) r) e^{il theta} e^{ipz}.
"""

import logging
import math
from abc import abstractmethod
from dataclasses import asdict, dataclass, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from services.core.constants import (
    AXISYM_DP_MULTIPLIER,
    AXISYM_N_P,
    DEFAULT_DP_MULTIPLIER,
    DEFAULT_N_L,
    DEFAULT_N_P,
    KUMMER_A_RANGE,
    KUMMER_GROWTH_CAP,
)
from services.core.exceptions import ConfigError, DomainError
from services.core.interfaces import CylindricalPoints, IBasisFamily
from services.specfun import bessel_j, bessel_j_derivative, bessel_j_over_x, kummer_m_weighted

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BasisSpec:
    """Index set of the particular solutions.

    Columns are (l, p) with l in [-n_l, n_l] (only l = 0 when axisymmetric) and
    p = k * dp for k in [-n_p, n_p], dp = dp_multiplier * sqrt(lambda) / (n_p + 1).
    The field-free family only has p^2 <= lambda, so there the multiplier is
    capped at 1 and every index stays usable.
    ``dp`` records the spacing actually used by a finished solve.
    """

    n_l: int = DEFAULT_N_L
    n_p: int = DEFAULT_N_P
    dp_multiplier: float = DEFAULT_DP_MULTIPLIER
    axisymmetric: bool = False
    b_zero_mode: bool = False
    dp: Optional[float] = None

    def __post_init__(self):
        if self.n_l < 0:
            raise ConfigError(f"n_l must be non-negative, got {self.n_l}")
        if self.n_p < 1:
            raise ConfigError(f"n_p must be at least 1, got {self.n_p}")
        if self.dp_multiplier <= 0:
            raise ConfigError(f"dp multiplier must be positive, got {self.dp_multiplier}")

    @classmethod
    def general(cls, **overrides: Any) -> "BasisSpec":
        return cls(**overrides)

    @classmethod
    def axisymmetric_default(cls, **overrides: Any) -> "BasisSpec":
        params = {"n_p": AXISYM_N_P, "dp_multiplier": AXISYM_DP_MULTIPLIER, "axisymmetric": True}
        params.update(overrides)
        return cls(**params)

    @property
    def effective_multiplier(self) -> float:
        return min(self.dp_multiplier, 1.0) if self.b_zero_mode else self.dp_multiplier

    def delta_p(self, lam: float) -> float:
        return self.effective_multiplier * math.sqrt(max(lam, 0.0)) / (self.n_p + 1)

    def l_values(self) -> List[int]:
        if self.axisymmetric:
            return [0]
        return list(range(-self.n_l, self.n_l + 1))

    def columns(self, lam: float) -> Tuple[np.ndarray, np.ndarray]:
        """(l, p) of every column in lexicographic order, before any p filtering."""
        ks = np.arange(-self.n_p, self.n_p + 1)
        dp = self.delta_p(lam)
        l_values = np.repeat(np.asarray(self.l_values()), ks.size)
        p_values = np.tile(ks * dp, len(self.l_values()))
        return l_values, p_values

    @property
    def size(self) -> int:
        return len(self.l_values()) * (2 * self.n_p + 1)

    def snapshot(self, lam: float) -> "BasisSpec":
        return replace(self, dp=self.delta_p(lam))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BasisSpec":
        known = {"n_l", "n_p", "dp_multiplier", "axisymmetric", "b_zero_mode", "dp"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown basis keys: {sorted(unknown)}")
        return cls(**data)


RadialTerms = Tuple[np.ndarray, np.ndarray, np.ndarray]


class SeparatedBasis(IBasisFamily):
    """Columns of the form radial(r) e^{il theta} e^{ipz}.

    Subclasses supply the radial factor, its r-derivative and radial(r)/r for
    every distinct (l, p^2); columns sharing a radial factor reuse it.
    """

    @abstractmethod
    def radial_terms(
        self,
        l_unique: np.ndarray,
        p2_unique: np.ndarray,
        lam: float,
        b_field: float,
        r: np.ndarray,
    ) -> RadialTerms:
        """(radial, d radial/dr, radial/r) arrays of shape (n_unique, n_points)."""

    def _prepare(self, l_values, p_values, lam, b_field, points: CylindricalPoints):
        l_values = np.asarray(l_values, dtype=int)
        p_values = np.asarray(p_values, dtype=float)
        if l_values.size == 0 or len(points) == 0:
            raise ConfigError("basis evaluation needs at least one column and one point")
        keys = np.stack([l_values.astype(float), p_values**2], axis=1)
        unique, inverse = np.unique(keys, axis=0, return_inverse=True)
        inverse = np.asarray(inverse).reshape(-1)
        terms = self.radial_terms(
            unique[:, 0].astype(int), unique[:, 1], lam, b_field, np.asarray(points.r)
        )
        phase = np.exp(
            1j * (np.outer(points.angle, l_values) + np.outer(points.z, p_values))
        )
        return l_values, p_values, inverse, terms, phase

    def evaluate(self, l_values, p_values, lam, b_field, points):
        _, _, inverse, (radial, _, _), phase = self._prepare(
            l_values, p_values, lam, b_field, points
        )
        return radial[inverse].T * phase

    def gradient(self, l_values, p_values, lam, b_field, points):
        l_values, p_values, inverse, (radial, d_radial, over_r), phase = self._prepare(
            l_values, p_values, lam, b_field, points
        )
        value = radial[inverse].T * phase
        d_r = d_radial[inverse].T * phase
        d_angle = 1j * l_values[None, :] * over_r[inverse].T * phase
        cos_t = np.cos(points.angle)[:, None]
        sin_t = np.sin(points.angle)[:, None]
        grad = np.empty(value.shape + (3,), dtype=complex)
        grad[..., 0] = d_r * cos_t - d_angle * sin_t
        grad[..., 1] = d_r * sin_t + d_angle * cos_t
        grad[..., 2] = 1j * p_values[None, :] * value
        return grad

    def cylindrical_gradient(self, l_values, p_values, lam, b_field, points) -> np.ndarray:
        """Components (d_r, r^{-1} d_theta, d_z) of every column; shape (n_points, n_cols, 3)."""
        l_values, p_values, inverse, (radial, d_radial, over_r), phase = self._prepare(
            l_values, p_values, lam, b_field, points
        )
        grad = np.empty((len(points), l_values.size, 3), dtype=complex)
        grad[..., 0] = d_radial[inverse].T * phase
        grad[..., 1] = 1j * l_values[None, :] * over_r[inverse].T * phase
        grad[..., 2] = 1j * p_values[None, :] * radial[inverse].T * phase
        return grad


class KummerBasis(SeparatedBasis):
    """Confluent hypergeometric particular solutions for B > 0."""

    def admissible_p(self, p_values, lam):
        return np.ones(np.shape(p_values), dtype=bool)

    def resolvable(self, l_values, p_values, lam, b_field, r_max):
        """Drop columns whose e^{-zeta/2} M(a, |l|+1, zeta) exceeds the growth cap at r_max.

        Such columns are numerically zero near the axis once normalized, so
        they add directions that only carry rounding noise.
        """
        l_values = np.asarray(l_values, dtype=int)
        p_values = np.asarray(p_values, dtype=float)
        if b_field <= 0 or l_values.size == 0:
            return np.ones(l_values.shape, dtype=bool)
        abs_l = np.abs(l_values).astype(float)
        a = 0.5 * (l_values + abs_l + 1.0 - (lam - p_values**2) / b_field)
        keep = (a >= KUMMER_A_RANGE[0]) & (a <= KUMMER_A_RANGE[1])
        zeta = 0.5 * b_field * r_max**2
        growth = np.full(a.shape, np.inf)
        if keep.any():
            growth[keep] = np.abs(np.atleast_1d(kummer_m_weighted(a[keep], abs_l[keep] + 1.0, zeta)))
        keep &= growth <= KUMMER_GROWTH_CAP
        if not keep.all():
            logger.debug(
                "Dropping %d of %d Kummer columns whose radial growth exceeds %.0e",
                int((~keep).sum()), keep.size, KUMMER_GROWTH_CAP,
            )
        return keep

    def radial_terms(self, l_unique, p2_unique, lam, b_field, r):
        if b_field <= 0:
            raise DomainError("Kummer particular solutions need B > 0")
        abs_l = np.abs(l_unique).astype(float)[:, None]
        a = 0.5 * (l_unique[:, None] + abs_l + 1.0 - (lam - p2_unique[:, None]) / b_field)
        b = abs_l + 1.0
        zeta = 0.5 * b_field * r[None, :] ** 2
        envelope = np.asarray(kummer_m_weighted(a, b, zeta, 0.0))
        shifted = np.asarray(kummer_m_weighted(a + 1.0, b + 1.0, zeta, 0.0))

        scale = (0.5 * b_field) ** (0.5 * abs_l)
        r_pow = r[None, :] ** abs_l
        r_pow_m1 = r[None, :] ** np.maximum(abs_l - 1.0, 0.0)
        radial = scale * r_pow * envelope
        d_envelope = b_field * r[None, :] * (-0.5 * envelope + (a / b) * shifted)
        d_radial = scale * (abs_l * r_pow_m1 * envelope + r_pow * d_envelope)
        over_r = np.where(abs_l >= 1.0, scale * r_pow_m1 * envelope, 0.0)
        return radial, d_radial, over_r


class BesselBasis(SeparatedBasis):
    """Field-free particular solutions J_{|l|}(k r), k = sqrt(lambda - p^2)."""

    def admissible_p(self, p_values, lam):
        return np.asarray(p_values, dtype=float) ** 2 <= lam

    def radial_terms(self, l_unique, p2_unique, lam, b_field, r):
        if np.any(p2_unique > lam):
            raise DomainError("Bessel particular solutions need p^2 <= lambda")
        k = np.sqrt(np.maximum(lam - p2_unique, 0.0))
        radial = np.empty((l_unique.size, r.size))
        d_radial = np.empty_like(radial)
        over_r = np.zeros_like(radial)
        for nu in np.unique(np.abs(l_unique)):
            rows = np.nonzero(np.abs(l_unique) == nu)[0]
            kr = k[rows, None] * r[None, :]
            radial[rows] = bessel_j(int(nu), kr)
            d_radial[rows] = k[rows, None] * bessel_j_derivative(int(nu), kr)
            if nu >= 1:
                over_r[rows] = k[rows, None] * bessel_j_over_x(int(nu), kr)
        return radial, d_radial, over_r


def _as_points(point) -> CylindricalPoints:
    arr = np.asarray(point, dtype=float).reshape(-1, 3)
    if np.any(arr[:, 0] < 0):
        raise DomainError("cylindrical radius must be non-negative")
    return CylindricalPoints(r=arr[:, 0], angle=arr[:, 1], z=arr[:, 2])


def _single(values: np.ndarray, point) -> Any:
    if np.ndim(point) == 1:
        return values[0]
    return values


def particular_solution(l: int, p: float, lam: float, B: float, point) -> Any:
    """psi_{l,p}(r, theta, z; lambda) at cylindrical point(s) (r, theta, z)."""
    if B <= 0:
        raise DomainError(f"particular solutions need B > 0, got {B}")
    values = KummerBasis().evaluate([l], [p], lam, B, _as_points(point))[:, 0]
    return _single(values, point)


def particular_solution_gradient(l: int, p: float, lam: float, B: float, point) -> np.ndarray:
    """(d_r, r^{-1} d_theta, d_z) psi_{l,p} at cylindrical point(s)."""
    if B <= 0:
        raise DomainError(f"particular solutions need B > 0, got {B}")
    grad = KummerBasis().cylindrical_gradient([l], [p], lam, B, _as_points(point))[:, 0, :]
    return _single(grad, point)


def bessel_basis(l: int, p: float, lam: float, point) -> Any:
    """J_{|l|}(sqrt(lambda - p^2) r) e^{il theta} e^{ipz} at cylindrical point(s)."""
    if p * p > lam:
        raise DomainError("bessel basis needs p^2 <= lambda", details={"p": p, "lambda": lam})
    values = BesselBasis().evaluate([l], [p], lam, 0.0, _as_points(point))[:, 0]
    return _single(values, point)
