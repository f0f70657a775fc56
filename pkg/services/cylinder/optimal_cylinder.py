"""Cylinder eigenvalues by separation of variables and the optimal-cylinder problem.

For the unit-volume cylinder of height h the cross-section is a disk of area
1/h; the scaling identity turns its ground state into h * lambda_1(D, B/h) with
D the unit-area disk. The minimization therefore runs on

    f(h) = B + g(h),   g(h) = h * excess(D, B/h) + pi^2 / h^2,

where excess is the disk eigenvalue above its Landau level. Working with g
keeps the objective well resolved when f - B is tiny compared to B.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict

import numpy as np

from services.core.constants import (
    CYLINDER_AUDIT_POINTS,
    CYLINDER_GSS_RTOL,
    CYLINDER_H_MIN,
    CYLINDER_SCAN_POINTS,
)
from services.core.exceptions import DomainError, SolverError
from services.core.search import golden_section
from services.disk2d import disk_lambda1, disk_lambda1_excess
from services.specfun import bessel_j_zero

logger = logging.getLogger(__name__)

UNIT_AREA_RADIUS = 1.0 / math.sqrt(math.pi)
SCAN_EXTENSIONS = 4


@dataclass(frozen=True)
class OptimalCylinder:
    """Minimizer of the ground-state energy among unit-volume circular cylinders."""

    B: float
    h_star: float
    R_star: float
    lambda_star: float

    @property
    def excess(self) -> float:
        return self.lambda_star - self.B

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def cylinder_lambda1(R: float, h: float, B: float) -> float:
    """lambda_1(D_R, B) + pi^2 / h^2."""
    if not math.isfinite(h) or h <= 0:
        raise DomainError(f"cylinder height must be positive, got {h}")
    return disk_lambda1(R, B) + math.pi**2 / h**2


def cylinder_excess(h: float, B: float) -> float:
    """g(h) = lambda_1 of the unit-volume cylinder of height h, minus B."""
    return h * disk_lambda1_excess(UNIT_AREA_RADIUS, B / h) + math.pi**2 / h**2


def optimal_cylinder(B: float) -> OptimalCylinder:
    """Minimize the unit-volume cylinder ground state over the height.

    B = 0 has a closed form. Otherwise a log-spaced scan over [0.05, max(20, B)]
    brackets the minimum, golden section refines it, and an audit grid of 50
    log-spaced heights in [h*/10, 10 h*] confirms that no lower value was missed.

    Raises:
        DomainError: If B is negative or not finite
        SolverError: If the minimum cannot be bracketed or fails the audit
    """
    if not math.isfinite(B) or B < 0:
        raise DomainError(f"field strength must be non-negative and finite, got {B}")
    if B == 0:
        return field_free_optimal_cylinder()

    def g(h: float) -> float:
        return cylinder_excess(h, B)

    lo, hi = _scan_bracket(g, CYLINDER_H_MIN, max(20.0, B))
    best = golden_section(g, lo, hi, rtol=CYLINDER_GSS_RTOL)

    for attempt in range(2):
        audit_h = np.geomspace(best.x / 10.0, best.x * 10.0, CYLINDER_AUDIT_POINTS)
        audit_g = np.array([g(h) for h in audit_h])
        slack = 1e-12 * max(abs(best.fx), 1.0)
        i = int(np.argmin(audit_g))
        if audit_g[i] >= best.fx - slack:
            break
        logger.warning(
            "Optimal cylinder audit found a lower value at h=%.6g (B=%.6g); re-bracketing",
            audit_h[i], B,
        )
        lo = float(audit_h[max(i - 1, 0)])
        hi = float(audit_h[min(i + 1, audit_h.size - 1)])
        best = golden_section(g, lo, hi, rtol=CYLINDER_GSS_RTOL)
    else:
        raise SolverError(
            "optimal cylinder failed the audit grid after re-bracketing",
            details={"B": B, "h": best.x},
        )

    h_star = best.x
    result = OptimalCylinder(
        B=B,
        h_star=h_star,
        R_star=1.0 / math.sqrt(math.pi * h_star),
        lambda_star=B + best.fx,
    )
    logger.debug("Optimal cylinder: %s", result)
    return result


def field_free_optimal_cylinder() -> OptimalCylinder:
    """Closed form at B = 0: h* = (2 pi / j_{0,1}^2)^{1/3}, lambda* = 3 pi j_{0,1}^2 h* / 2."""
    j01_sq = bessel_j_zero(0, 1) ** 2
    h_star = (2.0 * math.pi / j01_sq) ** (1.0 / 3.0)
    return OptimalCylinder(
        B=0.0,
        h_star=h_star,
        R_star=1.0 / math.sqrt(math.pi * h_star),
        lambda_star=1.5 * math.pi * j01_sq * h_star,
    )


def _scan_bracket(g, h_lo: float, h_hi: float):
    for _ in range(SCAN_EXTENSIONS + 1):
        grid = np.geomspace(h_lo, h_hi, CYLINDER_SCAN_POINTS)
        values = np.array([g(h) for h in grid])
        i = int(np.argmin(values))
        if 0 < i < grid.size - 1:
            return float(grid[i - 1]), float(grid[i + 1])
        if i == 0:
            h_lo /= 4.0
        else:
            h_hi *= 4.0
    raise SolverError(
        "optimal cylinder height not bracketed",
        details={"h_lo": h_lo, "h_hi": h_hi},
    )


def h_star_asym(B: float) -> float:
    """Leading-order optimal height B / (6 pi log B)."""
    if B <= 1:
        raise DomainError(f"asymptotic height needs B > 1, got {B}")
    return B / (6.0 * math.pi * math.log(B))


def lambda_cyl_asym(B: float) -> float:
    """Leading-order optimal energy B + 36 pi^4 log(B)^2 / B^2."""
    if B <= 1:
        raise DomainError(f"asymptotic energy needs B > 1, got {B}")
    return B + 36.0 * math.pi**4 * math.log(B) ** 2 / B**2


def cylinder_ground_state_dB(R: float, h: float, B: float, step: float = 1e-3) -> float:
    """d/dB of cylinder_lambda1 by central differences of the disk eigenvalue."""
    delta = step * max(B, 1.0)
    if B - delta < 0:
        return (cylinder_lambda1(R, h, B + delta) - cylinder_lambda1(R, h, B)) / delta
    return (cylinder_lambda1(R, h, B + delta) - cylinder_lambda1(R, h, B - delta)) / (2.0 * delta)
