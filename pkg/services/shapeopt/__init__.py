"""Shape optimization of the ground-state energy over volume-normalized domains."""

from services.shapeopt.descent import (
    DescentIterate,
    DescentOptions,
    DescentTrajectory,
    LineSearchResult,
    gradient_descent,
    line_search,
    normalized_step,
)
from services.shapeopt.objective import (
    ObjectiveEval,
    ObjectiveSettings,
    finite_difference_gradient,
    hadamard_gradient,
    hellmann_feynman_dB,
    objective,
    objective_gradient,
)
from services.shapeopt.sweep import (
    INITIAL_KINDS,
    SweepOptions,
    SweepRecord,
    initial_shapes,
    sweep,
)

__all__ = [
    "DescentIterate",
    "DescentOptions",
    "DescentTrajectory",
    "INITIAL_KINDS",
    "LineSearchResult",
    "ObjectiveEval",
    "ObjectiveSettings",
    "SweepOptions",
    "SweepRecord",
    "finite_difference_gradient",
    "gradient_descent",
    "hadamard_gradient",
    "hellmann_feynman_dB",
    "initial_shapes",
    "line_search",
    "normalized_step",
    "objective",
    "objective_gradient",
    "sweep",
]
