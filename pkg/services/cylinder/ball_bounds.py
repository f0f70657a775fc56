"""Two-sided bounds for the ground state of a ball."""

import math

from services.core.constants import BALL_CONSTANT
from services.core.exceptions import DomainError
from services.cylinder.optimal_cylinder import cylinder_lambda1


def unit_volume_ball_radius() -> float:
    """(4 pi / 3)^{-1/3}."""
    return (4.0 * math.pi / 3.0) ** (-1.0 / 3.0)


def ball_lambda1_unit_volume_constant() -> float:
    """pi^{8/3} / 6^{2/3}: the gap B + constant below the unit-volume ball."""
    return BALL_CONSTANT


def ball_lower_bound(R: float, B: float) -> float:
    """B + (pi / (2R))^2, from the height bound with h = 2R."""
    if R <= 0 or B < 0:
        raise DomainError("ball bounds need R > 0 and B >= 0", details={"R": R, "B": B})
    return B + (math.pi / (2.0 * R)) ** 2


def inscribed_cylinder_radius(B: float) -> float:
    """R(B) = sqrt(4 log(B) / B)."""
    if B < math.e:
        raise DomainError(f"inscribed-cylinder construction needs B >= e, got {B}")
    return math.sqrt(4.0 * math.log(B) / B)


def ball_upper_bound(R: float, B: float) -> float:
    """Ground state of the cylinder of radius R(B) inscribed in the ball of radius R.

    The cylinder has height 2 sqrt(R^2 - R(B)^2); domain monotonicity makes its
    eigenvalue an upper bound for the ball.

    Raises:
        DomainError: If B < e or R(B) >= R
    """
    if R <= 0:
        raise DomainError(f"ball radius must be positive, got {R}")
    r_b = inscribed_cylinder_radius(B)
    if r_b >= R:
        raise DomainError(
            "inscribed cylinder radius exceeds the ball radius",
            details={"R": R, "B": B, "R_B": r_b},
        )
    h = 2.0 * math.sqrt(R**2 - r_b**2)
    return cylinder_lambda1(r_b, h, B)
