"""Optimal unit-volume cylinders over a grid of field strengths."""

import logging
from typing import Any, Dict

from data.schemas import CYLINDER_COLUMNS
from services.core.concurrency import run_concurrently
from services.core.exceptions import DomainError, ErrorClassifier
from services.cylinder import h_star_asym, lambda_cyl_asym, optimal_cylinder
from services.disk2d import ground_state_audit
from services.management.base import MagShapeCommand
from services.management.run_config import CylinderConfig, parse_grid

logger = logging.getLogger(__name__)


def cylinder_row(B: float, verify_l: bool = False) -> Dict[str, Any]:
    best = optimal_cylinder(B)
    row: Dict[str, Any] = {
        "B": B,
        "h_star": best.h_star,
        "R_star": best.R_star,
        "lambda_star": best.lambda_star,
    }
    try:
        row["h_asym"] = h_star_asym(B)
        row["lambda_asym"] = lambda_cyl_asym(B)
    except DomainError:
        row["h_asym"] = row["lambda_asym"] = None
    if verify_l:
        row["minimizing_l"] = ground_state_audit(best.R_star, B).minimizing_l
    return row


class Command(MagShapeCommand):
    help = "Tabulate h*(B), R*(B) and lambda*_cyl(B) with their asymptotics"
    config_class = CylinderConfig

    def add_command_arguments(self, parser):
        parser.add_argument("--grid", help="B grid as lo:hi:step (default: 0:170:0.2)")
        parser.add_argument(
            "--verify-l",
            action="store_true",
            default=None,
            help="Check that the disk ground state sits in the l = 0 sector",
        )

    def run(self, config: CylinderConfig):
        grid = parse_grid(config.grid)
        results = run_concurrently(
            lambda B: cylinder_row(float(B), config.verify_l),
            list(grid),
            threads=config.threads,
            return_exceptions=True,
        )
        rows = []
        for B, outcome in zip(grid, results):
            if isinstance(outcome, Exception):
                payload = self.record_failure(ErrorClassifier.classify(outcome))
                logger.warning("Cylinder row B=%.6g failed: %s", B, payload["message"])
                rows.append({"B": float(B), "error_code": payload["error_code"]})
            else:
                rows.append(outcome)
        self.record_artifact(
            self.repository.write_csv("cylinder.csv", CYLINDER_COLUMNS, rows, config.config_hash())
        )
        return {"rows": len(rows), "failed": len(self.failures)}
