"""Schemas of the persisted run artifacts.

These TypedDicts document the JSON files the commands read and write. The
producing code lives next to the domain types (``to_dict`` methods); the
schemas here are what other tools may rely on.
"""

from typing import Dict, List, Optional, Tuple, TypedDict


class ShapeFile(TypedDict):
    """Spherical-harmonic coefficients of a star-shaped domain."""

    l_max: int
    axisymmetric: bool
    coeffs: List[float]


class BasisFile(TypedDict):
    n_l: int
    n_p: int
    dp_multiplier: float
    axisymmetric: bool
    b_zero_mode: bool
    dp: Optional[float]


class SolveResultFile(TypedDict):
    """Accepted eigenpair; ``alpha`` entries are [re, im] pairs, ``columns`` are [l, p]."""

    # "lambda" is a reserved word, so these keys are listed in SOLVE_RESULT_KEYS
    sigma: float
    second_sigma: float
    check_sigma: float
    B: float
    basis: BasisFile
    columns: List[Tuple[int, float]]
    alpha: List[Tuple[float, float]]
    scale: float
    center: List[float]
    degenerate: bool
    rank: int
    window: List[float]
    evaluations: int
    shape: Optional[ShapeFile]


SOLVE_RESULT_KEYS = ("lambda",) + tuple(SolveResultFile.__annotations__)


class IterateEntry(TypedDict):
    index: int
    J: float
    grad_norm: float
    beta: float
    coeffs: List[float]


class TrajectoryFile(TypedDict):
    B: float
    l_max: int
    axisymmetric: bool
    stop_reason: Optional[str]
    rejections: Dict[str, int]
    iterates: List[IterateEntry]


class ErrorPayload(TypedDict):
    """Printed to stderr by a failing command."""

    error_code: str
    message: str
    exit_code: int
    details: Dict[str, object]


class RunManifest(TypedDict):
    """Written next to the artifacts of each command run."""

    command: str
    config: Dict[str, object]
    config_hash: str
    version: str
    artifacts: List[str]
    failures: List[ErrorPayload]


CYLINDER_COLUMNS = [
    "B",
    "h_star",
    "R_star",
    "lambda_star",
    "h_asym",
    "lambda_asym",
    "minimizing_l",
    "error_code",
]
BALL_COLUMNS = [
    "B",
    "lambda1",
    "lambda1_minus_B",
    "lower_bound",
    "upper_bound",
    "constant",
    "sigma",
    "error_code",
]
SWEEP_COLUMNS = [
    "B",
    "mode",
    "J",
    "h",
    "R",
    "diam",
    "r_in",
    "iterations",
    "stop_reason",
    "overlap_rel_diff",
    "error_code",
]
REPORT_COLUMNS = [
    "B",
    "lambda_star",
    "lambda_cyl_star",
    "lambda_ball",
    "quotient",
    "h",
    "h_star",
    "R",
    "R_star",
    "height_floor",
    "elongation_bound",
    "elongation_holds",
    "radius_asym",
    "inradius_bound",
    "inradius_holds",
    "diameter_bound",
    "h_at_least_h_star",
    "R_at_least_R_star",
]
