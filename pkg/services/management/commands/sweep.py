"""Two-stage sweep of minimizers over a grid of field strengths."""

import logging

from data.schemas import SWEEP_COLUMNS
from services.core.constants import SolverMode
from services.core.exceptions import MagShapeError
from services.core.factories import TrackerFactory
from services.geometry import mesh_grid
from services.management.base import MagShapeCommand
from services.management.descent_setup import sweep_options
from services.management.run_config import SweepConfig, parse_grid
from services.shapeopt import INITIAL_KINDS, sweep

logger = logging.getLogger(__name__)


class Command(MagShapeCommand):
    help = "Optimize over a B grid, general mode first and axisymmetric from --axisym-from"
    config_class = SweepConfig

    def add_command_arguments(self, parser):
        parser.add_argument("--grid", help="B grid as lo:hi:step (default: 20:170:10)")
        parser.add_argument(
            "--initial",
            action="append",
            choices=INITIAL_KINDS,
            help="Starting shape kind for the first row; repeat to try several",
        )
        parser.add_argument("--mode", choices=[m.value for m in SolverMode], help="Solver mode")
        parser.add_argument("--n-target", type=int, help="Target number of collocation points")
        parser.add_argument("--i-max", type=int, help="Maximum iterations per row")
        parser.add_argument("--eps", type=float, help="Stop once |J_i - J_(i-1)| < eps")
        parser.add_argument("--beta-max", type=float, help="Initial line-search step")
        parser.add_argument("--l-max", type=int, help="Harmonic degree of the shapes")
        parser.add_argument("--axisym-from", type=float, help="First B of the axisymmetric stage")
        parser.add_argument("--overlap", type=float, help="Width of the window where both modes run")

    def run(self, config: SweepConfig):
        grid = parse_grid(config.grid)
        tracker = TrackerFactory.create_sweep_tracker(grid)
        records = sweep(grid, sweep_options(config), tracker)

        for record in records:
            if not record.ok:
                self.failures.append(record.error)
                continue
            stem = f"sweep/B{record.b_field:g}_{record.mode.value}"
            try:
                self.record_artifact(self.repository.save_json(f"{stem}_shape.json", record.shape.to_dict()))
                self.record_artifact(
                    self.repository.save_json(f"{stem}_trajectory.json", record.trajectory.to_dict())
                )
                vertices, faces = mesh_grid(record.shape)
                self.record_artifact(self.repository.write_obj(f"{stem}_mesh.obj", vertices, faces))
            except MagShapeError as exc:
                logger.warning("Could not export artifacts for B=%.6g: %s", record.b_field, exc.message)

        self.record_artifact(
            self.repository.write_csv(
                "sweep.csv", SWEEP_COLUMNS, [r.to_row() for r in records], config.config_hash()
            )
        )
        self.record_artifact(
            self.repository.save_json("sweep_progress.json", tracker.get_progress_data())
        )
        return {
            "rows": len(records),
            "failed": len(self.failures),
            "phases": tracker.get_phase_counts(),
        }
