"""Geometric diagnostics for computed minimizers, compared against optimal cylinders.

Every check is reported as a value, a reference and a flag. None of them is
ever raised: several hold only asymptotically or only for convex minimizers.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

from services.cylinder.optimal_cylinder import OptimalCylinder
from services.geometry.descriptors import Descriptors

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MinimizerDiagnostics:
    B: float
    lambda_star: float
    lambda_cyl: float
    quotient: Optional[float]
    height_floor: Optional[float]
    height_floor_holds: Optional[bool]
    lemma_floor: float
    h_asymptotic: Optional[float]
    h_vs_h_star: bool
    R_vs_R_star: bool
    R_squared: float
    R_squared_reference: Optional[float]
    inradius_floor: float
    inradius_floor_holds: bool
    diameter_cap: float
    diameter_cap_holds: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def minimizer_diagnostics(
    lambda_star: float,
    B: float,
    shape_descriptors: Descriptors,
    cylinder: OptimalCylinder,
) -> MinimizerDiagnostics:
    """Compare a unit-volume minimizer with the optimal cylinder at the same field.

    Args:
        lambda_star: Ground-state energy of the computed minimizer
        B: Field strength
        shape_descriptors: Sampled (h, R, diam, r_in) of the minimizer
        cylinder: Optimal cylinder at B

    Returns:
        MinimizerDiagnostics: Values, references and flags; the inradius floor
        and the diameter cap are only meaningful for convex minimizers.
    """
    d = shape_descriptors
    gap = lambda_star - B
    cyl_gap = cylinder.lambda_star - B
    quotient = gap / cyl_gap if cyl_gap > 0 else None

    if gap > 0:
        height_floor: Optional[float] = math.pi / math.sqrt(gap)
        height_floor_holds: Optional[bool] = d.h >= height_floor
    else:
        height_floor, height_floor_holds = None, None

    log_b = math.log(B) if B > 1 else None
    diagnostics = MinimizerDiagnostics(
        B=B,
        lambda_star=lambda_star,
        lambda_cyl=cylinder.lambda_star,
        quotient=quotient,
        height_floor=height_floor,
        height_floor_holds=height_floor_holds,
        lemma_floor=B + math.pi**2 / d.h**2,
        h_asymptotic=B / (6.0 * math.pi * log_b) if log_b else None,
        h_vs_h_star=d.h >= cylinder.h_star,
        R_vs_R_star=d.R >= cylinder.R_star,
        R_squared=d.R**2,
        R_squared_reference=6.0 * log_b / B if log_b else None,
        inradius_floor=math.pi**2 / (4.0 * lambda_star),
        inradius_floor_holds=d.r_in**2 >= math.pi**2 / (4.0 * lambda_star),
        diameter_cap=12.0 / math.pi**3 * lambda_star,
        diameter_cap_holds=d.diam <= 12.0 / math.pi**3 * lambda_star,
    )
    if height_floor_holds is False:
        logger.warning(
            "Minimizer at B=%.6g is shorter than the height floor: h=%.6g < %.6g",
            B, d.h, height_floor,
        )
    return diagnostics
