"""Closed-form cylinder and ball oracles for the three-dimensional solver."""

from services.cylinder.ball_bounds import (
    ball_lambda1_unit_volume_constant,
    ball_lower_bound,
    ball_upper_bound,
    inscribed_cylinder_radius,
    unit_volume_ball_radius,
)
from services.cylinder.diagnostics import MinimizerDiagnostics, minimizer_diagnostics
from services.cylinder.optimal_cylinder import (
    OptimalCylinder,
    cylinder_excess,
    cylinder_ground_state_dB,
    cylinder_lambda1,
    field_free_optimal_cylinder,
    h_star_asym,
    lambda_cyl_asym,
    optimal_cylinder,
)

__all__ = [
    "MinimizerDiagnostics",
    "OptimalCylinder",
    "ball_lambda1_unit_volume_constant",
    "ball_lower_bound",
    "ball_upper_bound",
    "cylinder_excess",
    "cylinder_ground_state_dB",
    "cylinder_lambda1",
    "field_free_optimal_cylinder",
    "h_star_asym",
    "inscribed_cylinder_radius",
    "lambda_cyl_asym",
    "minimizer_diagnostics",
    "optimal_cylinder",
    "unit_volume_ball_radius",
]
