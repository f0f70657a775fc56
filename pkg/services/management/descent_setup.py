"""Translation of descent run configurations into optimizer options."""

from typing import List, Optional

from services.core.constants import DEFAULT_L_MAX, DEFAULT_L_MAX_AXISYM, SolverMode
from services.management.run_config import DescentConfig, SweepConfig
from services.mps3d import BasisSpec, SolverOptions
from services.shapeopt import DescentOptions, ObjectiveSettings, SweepOptions


def resolve_mode(config: DescentConfig, B: float) -> SolverMode:
    mode = SolverMode(config.mode)
    if mode != SolverMode.AUTO:
        return mode
    return SolverMode.GENERAL if B < config.axisym_from else SolverMode.AXISYM


def descent_options(config: DescentConfig, mode: Optional[SolverMode]) -> DescentOptions:
    """Descent options for a fixed mode; with no mode the basis is left to the caller."""
    basis: Optional[BasisSpec] = None
    if mode == SolverMode.AXISYM:
        basis = BasisSpec.axisymmetric_default()
    elif mode == SolverMode.GENERAL:
        basis = BasisSpec.general()
    return DescentOptions(
        i_max=config.i_max,
        eps=config.eps,
        beta_max=config.beta_max,
        objective=ObjectiveSettings(
            basis=basis,
            solver=SolverOptions(n_target=config.n_target, seed=config.seed, threads=config.threads),
        ),
    )


def l_max_for(config: DescentConfig, mode: SolverMode) -> int:
    if config.l_max is not None:
        return config.l_max
    return DEFAULT_L_MAX_AXISYM if mode == SolverMode.AXISYM else DEFAULT_L_MAX


def sweep_options(config: SweepConfig) -> SweepOptions:
    mode = SolverMode(config.mode)
    descent = descent_options(config, None)
    general_l_max = DEFAULT_L_MAX
    axisym_l_max = DEFAULT_L_MAX_AXISYM
    if config.l_max is not None:
        if mode == SolverMode.AXISYM:
            axisym_l_max = config.l_max
        else:
            general_l_max = config.l_max
    initial: List[str] = list(config.initial)
    return SweepOptions(
        descent=descent,
        b_axi=config.axisym_from,
        overlap=config.overlap,
        l_max=general_l_max,
        l_max_axisym=axisym_l_max,
        initial=initial,
        seed=config.seed,
        mode=mode,
    )
