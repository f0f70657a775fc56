"""Merge sweep, cylinder and ball tables into one figure-data bundle."""

import logging
from typing import Any, Dict, List, Optional

from data.repositories import read_float
from data.schemas import REPORT_COLUMNS
from services.core.exceptions import ConfigError
from services.cylinder import OptimalCylinder, minimizer_diagnostics, optimal_cylinder
from services.geometry import Descriptors
from services.management.base import MagShapeCommand
from services.management.run_config import ReportConfig

logger = logging.getLogger(__name__)

# Two grid values closer than this are the same field strength
B_MATCH_TOL = 1e-9


def _index_by_b(rows: List[Dict[str, str]], column: str) -> Dict[float, Dict[str, str]]:
    indexed = {}
    for row in rows:
        if read_float(row, column) is not None:
            indexed[read_float(row, "B")] = row
    return indexed


def _lookup(indexed: Dict[float, Dict[str, str]], B: float) -> Optional[Dict[str, str]]:
    for key, row in indexed.items():
        if abs(key - B) <= B_MATCH_TOL * max(1.0, abs(B)):
            return row
    return None


def best_rows(sweep_rows: List[Dict[str, str]]) -> List[Dict[str, str]]:
    """Lowest successful J per field strength, in grid order."""
    best: Dict[float, Dict[str, str]] = {}
    for row in sweep_rows:
        J = read_float(row, "J")
        if J is None:
            continue
        B = read_float(row, "B")
        if B not in best or J < read_float(best[B], "J"):
            best[B] = row
    return [best[B] for B in sorted(best)]


def report_row(
    row: Dict[str, str],
    cylinder_rows: Dict[float, Dict[str, str]],
    ball_rows: Dict[float, Dict[str, str]],
) -> Dict[str, Any]:
    B = read_float(row, "B")
    lambda_star = read_float(row, "J")
    cyl_row = _lookup(cylinder_rows, B)
    if cyl_row is not None:
        cylinder = OptimalCylinder(
            B=B,
            h_star=read_float(cyl_row, "h_star"),
            R_star=read_float(cyl_row, "R_star"),
            lambda_star=read_float(cyl_row, "lambda_star"),
        )
    else:
        logger.info("B=%.6g missing from the cylinder table; computing it", B)
        cylinder = optimal_cylinder(B)
    ball_row = _lookup(ball_rows, B)

    out: Dict[str, Any] = {
        "B": B,
        "lambda_star": lambda_star,
        "lambda_cyl_star": cylinder.lambda_star,
        "lambda_ball": read_float(ball_row, "lambda1") if ball_row else None,
        "h_star": cylinder.h_star,
        "R_star": cylinder.R_star,
    }
    values = [read_float(row, key) for key in ("h", "R", "diam", "r_in")]
    if any(v is None for v in values):
        gap = lambda_star - B
        cyl_gap = cylinder.lambda_star - B
        out["quotient"] = gap / cyl_gap if cyl_gap > 0 else None
        return out

    shape = Descriptors(*values)
    diagnostics = minimizer_diagnostics(lambda_star, B, shape, cylinder)
    out.update(
        {
            "quotient": diagnostics.quotient,
            "h": shape.h,
            "R": shape.R,
            "height_floor": diagnostics.lemma_floor,
            "elongation_bound": diagnostics.height_floor,
            "elongation_holds": diagnostics.height_floor_holds,
            "radius_asym": diagnostics.R_squared_reference,
            "inradius_bound": diagnostics.inradius_floor,
            "inradius_holds": diagnostics.inradius_floor_holds,
            "diameter_bound": diagnostics.diameter_cap,
            "h_at_least_h_star": diagnostics.h_vs_h_star,
            "R_at_least_R_star": diagnostics.R_vs_R_star,
        }
    )
    return out


class Command(MagShapeCommand):
    help = "Build the consolidated report table from earlier sweep, cylinder and ball runs"
    config_class = ReportConfig

    def add_command_arguments(self, parser):
        parser.add_argument("--sweep-csv", help="Sweep table inside --out (default: sweep.csv)")
        parser.add_argument("--cylinder-csv", help="Cylinder table inside --out (default: cylinder.csv)")
        parser.add_argument("--ball-csv", help="Ball table inside --out (default: ball.csv)")

    def run(self, config: ReportConfig):
        inputs = {
            "sweep": config.sweep_csv,
            "cylinder": config.cylinder_csv,
            "ball": config.ball_csv,
        }
        missing = [name for name in inputs.values() if not self.repository.exists(name)]
        if missing:
            raise ConfigError(
                f"missing report inputs: {', '.join(missing)}",
                details={"missing": missing, "directory": self.repository.root},
            )

        provenance = {}
        tables = {}
        for key, name in inputs.items():
            provenance[key], tables[key] = self.repository.read_csv(name)

        cylinder_rows = _index_by_b(tables["cylinder"], "lambda_star")
        ball_rows = _index_by_b(tables["ball"], "lambda1")
        rows = [report_row(row, cylinder_rows, ball_rows) for row in best_rows(tables["sweep"])]
        for row in rows:
            quotient = row.get("quotient")
            if quotient is not None and not 0 < quotient <= 1:
                logger.warning("Quotient outside (0, 1] at B=%.6g: %.6g", row["B"], quotient)

        self.record_artifact(
            self.repository.write_csv("report.csv", REPORT_COLUMNS, rows, config.config_hash())
        )
        self.record_artifact(
            self.repository.save_json("report.json", {"inputs": provenance, "rows": rows})
        )
        return {"rows": len(rows)}
