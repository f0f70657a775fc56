"""Sweeps over the field strength with warm-started descents.

Below ``b_axi`` every row runs in general mode. From ``b_axi`` on the
axisymmetric fast path takes over; inside the overlap window
[b_axi, b_axi + overlap) both modes run and their minima are compared.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from services.core.constants import (
    DEFAULT_B_AXI,
    DEFAULT_L_MAX,
    DEFAULT_L_MAX_AXISYM,
    DEFAULT_OVERLAP,
    SolverMode,
)
from services.core.exceptions import ConfigError, GeometryError, MagShapeError
from services.geometry import (
    Descriptors,
    ShapeCoefficients,
    descriptors,
    normalize_unit_volume,
    oblate_shape,
    perturbed_ball,
    prolate_shape,
    unit_volume_ball,
)
from services.mps3d import BasisSpec
from services.shapeopt.descent import DescentOptions, DescentTrajectory, gradient_descent
from services.tracking.progress_tracker import SweepProgressTracker

logger = logging.getLogger(__name__)

# Relative J agreement expected between the two modes in the overlap window
OVERLAP_TOLERANCE = 1e-3
INITIAL_KINDS = ("ball", "prolate", "oblate", "random")


def initial_shapes(
    kind: str, l_max: int = DEFAULT_L_MAX, seed: int = 0, axisymmetric: bool = False
) -> ShapeCoefficients:
    """Unit-volume starting shape of the given kind.

    Raises:
        ConfigError: For an unknown kind
    """
    if kind == "ball":
        return unit_volume_ball(l_max, axisymmetric)
    if kind == "prolate":
        shape = prolate_shape(1.5, l_max, axisymmetric)
    elif kind == "oblate":
        shape = oblate_shape(0.7, l_max, axisymmetric)
    elif kind == "random":
        shape = perturbed_ball(min(4, l_max), 0.1, seed=seed, l_max=l_max, axisymmetric=axisymmetric)
    else:
        raise ConfigError(f"unknown initial shape kind: {kind}", details={"known": list(INITIAL_KINDS)})
    return normalize_unit_volume(shape)


@dataclass
class SweepOptions:
    descent: DescentOptions = field(default_factory=DescentOptions)
    b_axi: float = DEFAULT_B_AXI
    overlap: float = DEFAULT_OVERLAP
    l_max: int = DEFAULT_L_MAX
    l_max_axisym: int = DEFAULT_L_MAX_AXISYM
    initial: Sequence[str] = ("ball",)
    seed: int = 0
    mode: SolverMode = SolverMode.AUTO

    def __post_init__(self):
        unknown = [kind for kind in self.initial if kind not in INITIAL_KINDS]
        if unknown or not self.initial:
            raise ConfigError("invalid initial shape kinds", details={"kinds": list(self.initial)})
        if self.overlap < 0:
            raise ConfigError("overlap must be non-negative")

    def modes_for(self, b_field: float) -> List[SolverMode]:
        if self.mode != SolverMode.AUTO:
            return [self.mode]
        if b_field < self.b_axi:
            return [SolverMode.GENERAL]
        if b_field < self.b_axi + self.overlap:
            return [SolverMode.GENERAL, SolverMode.AXISYM]
        return [SolverMode.AXISYM]


@dataclass
class SweepRecord:
    """Outcome of one (B, mode) row; ``error`` holds the error payload of a failed row."""

    b_field: float
    mode: SolverMode
    J: Optional[float] = None
    shape: Optional[ShapeCoefficients] = None
    descriptors: Optional[Descriptors] = None
    trajectory: Optional[DescentTrajectory] = None
    initial: Optional[str] = None
    overlap_rel_diff: Optional[float] = None
    error: Optional[Dict[str, Any]] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_row(self) -> Dict[str, Any]:
        d = self.descriptors
        return {
            "B": self.b_field,
            "mode": self.mode.value,
            "J": self.J,
            "h": d.h if d else None,
            "R": d.R if d else None,
            "diam": d.diam if d else None,
            "r_in": d.r_in if d else None,
            "iterations": len(self.trajectory.iterates) - 1 if self.trajectory else None,
            "stop_reason": (
                self.trajectory.stop_reason.value
                if self.trajectory and self.trajectory.stop_reason
                else None
            ),
            "overlap_rel_diff": self.overlap_rel_diff,
            "error_code": self.error["error_code"] if self.error else None,
        }


def _options_for(mode: SolverMode, options: SweepOptions) -> DescentOptions:
    objective = options.descent.objective
    if mode == SolverMode.AXISYM:
        basis = objective.basis if objective.basis and objective.basis.axisymmetric else BasisSpec.axisymmetric_default()
    else:
        basis = objective.basis if objective.basis and not objective.basis.axisymmetric else BasisSpec.general()
    return replace(options.descent, objective=replace(objective, basis=basis))


def _start_shape(
    mode: SolverMode,
    options: SweepOptions,
    previous: Dict[SolverMode, ShapeCoefficients],
) -> Optional[ShapeCoefficients]:
    if mode in previous:
        return previous[mode]
    if mode == SolverMode.AXISYM and SolverMode.GENERAL in previous:
        return normalize_unit_volume(previous[SolverMode.GENERAL].to_axisymmetric(options.l_max_axisym))
    return None


def _run_mode(
    b_field: float,
    mode: SolverMode,
    options: SweepOptions,
    previous: Dict[SolverMode, ShapeCoefficients],
) -> SweepRecord:
    descent = _options_for(mode, options)
    axisymmetric = mode == SolverMode.AXISYM
    warm = _start_shape(mode, options, previous)
    if warm is not None:
        starts = [("warm", warm)]
    else:
        l_max = options.l_max_axisym if axisymmetric else options.l_max
        starts = [
            (kind, initial_shapes(kind, l_max, options.seed, axisymmetric))
            for kind in options.initial
        ]

    best: Optional[SweepRecord] = None
    last_error: Optional[MagShapeError] = None
    for label, start in starts:
        try:
            trajectory = gradient_descent(start, b_field, descent)
        except MagShapeError as exc:
            logger.warning("B=%.4g %s start %s failed: %s", b_field, mode.value, label, exc.message)
            last_error = exc
            continue
        if best is None or trajectory.final_J < best.J:
            best = SweepRecord(
                b_field=b_field, mode=mode, J=trajectory.final_J,
                shape=trajectory.final_shape, trajectory=trajectory, initial=label,
            )
    if best is None:
        assert last_error is not None
        return SweepRecord(b_field=b_field, mode=mode, error=last_error.to_payload())
    try:
        best.descriptors = descriptors(best.shape)
    except GeometryError as exc:
        logger.warning("Descriptors unavailable at B=%.4g: %s", b_field, exc.message)
    return best


def sweep(
    b_grid: Sequence[float],
    options: Optional[SweepOptions] = None,
    tracker: Optional[SweepProgressTracker] = None,
) -> List[SweepRecord]:
    """Optimize at every B of a sorted grid, warm-starting from the previous row.

    Failed rows are recorded with their error payload and the sweep continues.

    Raises:
        ConfigError: If the grid is empty, unsorted or has negative entries
    """
    options = options or SweepOptions()
    grid = np.asarray(list(b_grid), dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) < 0) or np.any(grid < 0):
        raise ConfigError("B grid must be non-empty, sorted and non-negative", details={"grid": grid.tolist()})
    tracker = tracker or SweepProgressTracker(grid)

    records: List[SweepRecord] = []
    previous: Dict[SolverMode, ShapeCoefficients] = {}
    for index, b_field in enumerate(grid):
        modes = options.modes_for(float(b_field))
        tracker.mark_started(index, "+".join(m.value for m in modes))
        row = [_run_mode(float(b_field), mode, options, previous) for mode in modes]
        for record in row:
            if record.ok:
                previous[record.mode] = record.shape
        _compare_overlap(row)
        records.extend(row)

        successes = [r for r in row if r.ok]
        if successes:
            tracker.mark_complete(index, min(r.J for r in successes))
        else:
            tracker.mark_failed(index, row[0].error["error_code"])
        logger.info("Sweep progress: %d%%", tracker.get_progress_percentage())
    return records


def _compare_overlap(row: List[SweepRecord]) -> None:
    by_mode = {r.mode: r for r in row if r.ok}
    general = by_mode.get(SolverMode.GENERAL)
    axisym = by_mode.get(SolverMode.AXISYM)
    if general is None or axisym is None:
        return
    rel = abs(axisym.J - general.J) / abs(general.J)
    axisym.overlap_rel_diff = rel
    general.overlap_rel_diff = rel
    if rel > OVERLAP_TOLERANCE:
        logger.warning(
            "Modes disagree at B=%.4g: general J=%.10g axisym J=%.10g (rel %.2e)",
            general.b_field, general.J, axisym.J, rel,
        )
