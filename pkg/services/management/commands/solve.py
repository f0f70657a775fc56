"""Solve for the ground state of a single shape."""

import logging
from dataclasses import replace

from data.repositories import load_json_file
from services.core.constants import SolverMode
from services.core.exceptions import ConfigError
from services.core.factories import AuditFactory
from services.core.interfaces import AuditContext
from services.geometry import ShapeCoefficients
from services.management.base import MagShapeCommand
from services.management.run_config import SolveConfig
from services.mps3d import BasisSpec, SolverOptions, find_eigenvalue

logger = logging.getLogger(__name__)


def resolve_shape(config: SolveConfig) -> ShapeCoefficients:
    shape = ShapeCoefficients.from_dict(load_json_file(config.shape))
    if config.mode == SolverMode.GENERAL.value and shape.axisymmetric:
        return shape.to_general()
    if config.mode == SolverMode.AXISYM.value and not shape.axisymmetric:
        raise ConfigError(
            "axisymmetric mode needs an axisymmetric shape file",
            details={"shape": config.shape},
        )
    return shape


def resolve_basis(config: SolveConfig, shape: ShapeCoefficients) -> BasisSpec:
    basis = BasisSpec.axisymmetric_default() if shape.axisymmetric else BasisSpec.general()
    overrides = {k: v for k, v in (("n_l", config.n_l), ("n_p", config.n_p)) if v is not None}
    return replace(basis, **overrides) if overrides else basis


class Command(MagShapeCommand):
    help = "Compute lambda_1(shape, B) with the method of particular solutions"
    config_class = SolveConfig

    def add_command_arguments(self, parser):
        parser.add_argument("shape", nargs="?", help="Shape JSON file")
        parser.add_argument("--B", type=float, help="Field strength (default: 0)")
        parser.add_argument("--mode", choices=[m.value for m in SolverMode], help="Solver mode")
        parser.add_argument("--n-target", type=int, help="Target number of collocation points")
        parser.add_argument("--n-l", type=int, help="Angular momentum cutoff of the basis")
        parser.add_argument("--n-p", type=int, help="Number of positive wave numbers")

    def run(self, config: SolveConfig):
        shape = resolve_shape(config)
        basis = resolve_basis(config, shape)
        options = SolverOptions(n_target=config.n_target, seed=config.seed, threads=config.threads)
        result = find_eigenvalue(shape, config.B, basis, options=options)

        pipeline = AuditFactory.create_solve_pipeline()
        findings = pipeline.run(
            result,
            AuditContext(
                b_field=config.B,
                sigma_accept=options.accept_for(basis),
                additional_data={"seed": config.seed},
            ),
        )
        audits = [
            {"name": f.name, "passed": f.passed, "value": f.value, "bound": f.bound}
            for f in findings
        ]
        payload = result.to_dict()
        payload["audits"] = audits
        self.record_artifact(self.repository.save_json("solve_result.json", payload))
        logger.info("lambda_1 = %.12g (sigma %.3e)", result.lam, result.sigma)
        return {
            "lambda": result.lam,
            "B": result.b_field,
            "sigma": result.sigma,
            "degenerate": result.degenerate,
            "audits_passed": all(a["passed"] for a in audits),
        }
