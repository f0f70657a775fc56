"""Ground state of the unit-volume ball against its closed-form bounds."""

import logging
from typing import Any, Dict

from data.schemas import BALL_COLUMNS
from services.core.exceptions import DomainError, MagShapeError
from services.cylinder import (
    ball_lambda1_unit_volume_constant,
    ball_lower_bound,
    ball_upper_bound,
    unit_volume_ball_radius,
)
from services.geometry import unit_volume_ball
from services.management.base import MagShapeCommand
from services.management.run_config import BallConfig, parse_grid
from services.mps3d import BasisSpec, SolverOptions, find_eigenvalue

logger = logging.getLogger(__name__)


def ball_row(B: float, options: SolverOptions) -> Dict[str, Any]:
    radius = unit_volume_ball_radius()
    result = find_eigenvalue(
        unit_volume_ball(0, axisymmetric=True), B, BasisSpec.axisymmetric_default(), options=options
    )
    try:
        upper = ball_upper_bound(radius, B)
    except DomainError:
        upper = None
    row = {
        "B": B,
        "lambda1": result.lam,
        "lambda1_minus_B": result.lam - B,
        "lower_bound": ball_lower_bound(radius, B),
        "upper_bound": upper,
        "constant": B + ball_lambda1_unit_volume_constant(),
        "sigma": result.sigma,
    }
    if result.lam < row["constant"]:
        logger.warning("Ball ground state below B + pi^(8/3)/6^(2/3) at B=%.6g", B)
    return row


class Command(MagShapeCommand):
    help = "Tabulate lambda_1 of the unit-volume ball with its two-sided bounds"
    config_class = BallConfig

    def add_command_arguments(self, parser):
        parser.add_argument("--grid", help="B grid as lo:hi:step (default: 0:170:10)")
        parser.add_argument("--n-target", type=int, help="Number of meridian collocation points")

    def run(self, config: BallConfig):
        options = SolverOptions(n_target=config.n_target, seed=config.seed, threads=config.threads)
        rows = []
        for B in parse_grid(config.grid):
            try:
                rows.append(ball_row(float(B), options))
            except MagShapeError as exc:
                payload = self.record_failure(exc)
                logger.warning("Ball row B=%.6g failed: %s", B, exc.message)
                rows.append({"B": float(B), "error_code": payload["error_code"]})
        self.record_artifact(
            self.repository.write_csv("ball.csv", BALL_COLUMNS, rows, config.config_hash())
        )
        gaps = [r["lambda1_minus_B"] for r in rows if "lambda1_minus_B" in r]
        return {
            "rows": len(rows),
            "failed": len(self.failures),
            "min_gap": min(gaps) if gaps else None,
        }
