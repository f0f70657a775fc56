"""Minimize the ground-state energy over unit-volume shapes at one field strength."""

import logging

from data.repositories import load_json_file
from data.schemas import SWEEP_COLUMNS
from services.core.constants import SolverMode
from services.core.exceptions import DescentAbortedError, GeometryError
from services.geometry import ShapeCoefficients, descriptors, mesh_grid
from services.management.base import MagShapeCommand
from services.management.descent_setup import descent_options, l_max_for, resolve_mode
from services.management.run_config import OptimizeConfig
from services.shapeopt import INITIAL_KINDS, SweepRecord, gradient_descent, initial_shapes

logger = logging.getLogger(__name__)


def starting_shape(config: OptimizeConfig, mode: SolverMode) -> ShapeCoefficients:
    axisymmetric = mode == SolverMode.AXISYM
    if config.shape:
        shape = ShapeCoefficients.from_dict(load_json_file(config.shape))
        if axisymmetric and not shape.axisymmetric:
            return shape.to_axisymmetric()
        if not axisymmetric and shape.axisymmetric:
            return shape.to_general()
        return shape
    return initial_shapes(config.initial, l_max_for(config, mode), config.seed, axisymmetric)


class Command(MagShapeCommand):
    help = "Run gradient descent on the rescaled ground-state energy J"
    config_class = OptimizeConfig

    def add_command_arguments(self, parser):
        parser.add_argument("--B", type=float, help="Field strength (default: 0)")
        parser.add_argument("--shape", help="Starting shape JSON file")
        parser.add_argument("--initial", choices=INITIAL_KINDS, help="Built-in starting shape")
        parser.add_argument("--mode", choices=[m.value for m in SolverMode], help="Solver mode")
        parser.add_argument("--n-target", type=int, help="Target number of collocation points")
        parser.add_argument("--i-max", type=int, help="Maximum number of iterations")
        parser.add_argument("--eps", type=float, help="Stop once |J_i - J_(i-1)| < eps")
        parser.add_argument("--beta-max", type=float, help="Initial line-search step")
        parser.add_argument("--l-max", type=int, help="Harmonic degree of the shape")
        parser.add_argument("--axisym-from", type=float, help="Field strength where auto mode turns axisymmetric")

    def run(self, config: OptimizeConfig):
        mode = resolve_mode(config, config.B)
        options = descent_options(config, mode)
        start = starting_shape(config, mode)
        prefix = f"optimize_B{config.B:g}"
        try:
            trajectory = gradient_descent(start, config.B, options)
        except DescentAbortedError as exc:
            if exc.trajectory is not None:
                self.record_artifact(
                    self.repository.save_json(f"{prefix}_trajectory.json", exc.trajectory.to_dict())
                )
            raise

        shape = trajectory.final_shape
        record = SweepRecord(
            b_field=config.B, mode=mode, J=trajectory.final_J, shape=shape,
            trajectory=trajectory, initial=config.initial if not config.shape else "file",
        )
        try:
            record.descriptors = descriptors(shape)
        except GeometryError as exc:
            logger.warning("Descriptors unavailable: %s", exc.message)

        self.record_artifact(self.repository.save_json(f"{prefix}_shape.json", shape.to_dict()))
        self.record_artifact(
            self.repository.save_json(f"{prefix}_trajectory.json", trajectory.to_dict())
        )
        vertices, faces = mesh_grid(shape)
        self.record_artifact(self.repository.write_obj(f"{prefix}_mesh.obj", vertices, faces))
        self.record_artifact(
            self.repository.write_csv(
                f"{prefix}_summary.csv", SWEEP_COLUMNS, [record.to_row()], config.config_hash()
            )
        )
        return {
            "B": config.B,
            "mode": mode.value,
            "J": trajectory.final_J,
            "iterations": len(trajectory.iterates) - 1,
            "stop_reason": trajectory.stop_reason.value if trajectory.stop_reason else None,
        }
