"""Normalized gradient descent on the shape coefficients."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from services.core.constants import (
    ARMIJO_C,
    BETA_MIN,
    DEFAULT_BETA_MAX,
    DEFAULT_EPS,
    DEFAULT_I_MAX,
    StopReason,
)
from services.core.exceptions import (
    ConfigError,
    DescentAbortedError,
    InadmissibleShapeError,
    MagShapeError,
    SolverError,
)
from services.core.factories import TrackerFactory
from services.core.interfaces import IRejectionTracker
from services.geometry import ShapeCoefficients
from services.shapeopt.objective import (
    ObjectiveEval,
    ObjectiveSettings,
    objective,
    objective_gradient,
)
from services.tracking.rejection_tracker import RejectionType

logger = logging.getLogger(__name__)


@dataclass
class DescentOptions:
    i_max: int = DEFAULT_I_MAX
    eps: float = DEFAULT_EPS
    beta_max: float = DEFAULT_BETA_MAX
    beta_min: float = BETA_MIN
    armijo: float = ARMIJO_C
    objective: ObjectiveSettings = field(default_factory=ObjectiveSettings)

    def __post_init__(self):
        if self.i_max < 0:
            raise ConfigError(f"i_max must be non-negative, got {self.i_max}")
        if self.eps <= 0:
            raise ConfigError(f"eps must be positive, got {self.eps}")
        if not 0 < self.beta_min <= self.beta_max:
            raise ConfigError(
                "need 0 < beta_min <= beta_max",
                details={"beta_min": self.beta_min, "beta_max": self.beta_max},
            )


@dataclass(frozen=True)
class DescentIterate:
    index: int
    coeffs: np.ndarray
    J: float
    grad_norm: float
    beta: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "J": self.J,
            "grad_norm": self.grad_norm,
            "beta": self.beta,
            "coeffs": [float(v) for v in self.coeffs],
        }


@dataclass
class DescentTrajectory:
    """Accepted iterates of one descent run; J is non-increasing along them."""

    b_field: float
    l_max: int
    axisymmetric: bool
    iterates: List[DescentIterate] = field(default_factory=list)
    stop_reason: Optional[StopReason] = None
    rejections: Dict[str, int] = field(default_factory=dict)

    @property
    def final_shape(self) -> ShapeCoefficients:
        if not self.iterates:
            raise SolverError("trajectory has no iterates")
        return ShapeCoefficients(self.iterates[-1].coeffs, self.l_max, self.axisymmetric)

    @property
    def final_J(self) -> float:
        return self.iterates[-1].J

    def to_dict(self) -> Dict[str, Any]:
        return {
            "B": self.b_field,
            "l_max": self.l_max,
            "axisymmetric": self.axisymmetric,
            "stop_reason": self.stop_reason.value if self.stop_reason else None,
            "rejections": dict(self.rejections),
            "iterates": [it.to_dict() for it in self.iterates],
        }


@dataclass(frozen=True)
class LineSearchResult:
    beta: float
    shape: ShapeCoefficients
    evaluation: Optional[ObjectiveEval]
    trials: int

    @property
    def stalled(self) -> bool:
        return self.beta == 0.0


def normalized_step(
    c: ShapeCoefficients, d: np.ndarray, beta: float, settings: ObjectiveSettings
) -> ShapeCoefficients:
    """(c - beta d) / |Omega_{c - beta d}|^{1/3}."""
    trial = c.with_coeffs(c.coeffs - beta * np.asarray(d))
    return trial.scaled(settings.shape_volume(trial) ** (-1.0 / 3.0))


def line_search(
    c: ShapeCoefficients,
    d: np.ndarray,
    B: float,
    beta_max: float,
    current: ObjectiveEval,
    options: Optional[DescentOptions] = None,
    tracker: Optional[IRejectionTracker] = None,
) -> LineSearchResult:
    """Backtracking from beta_max by halving until sufficient decrease.

    A trial is accepted when J(c(beta)) <= J(c) - armijo * beta * |d|^2.
    Inadmissible trial shapes count as +inf; trials whose eigenvalue is
    degenerate or whose solve fails are rejected like a missing decrease.
    A zero step signals a stall.
    """
    options = options or DescentOptions()
    tracker = tracker or TrackerFactory.create_rejection_tracker()
    d = np.asarray(d, dtype=float)
    if not np.all(np.isfinite(d)):
        raise ConfigError("descent direction must be finite")
    d_sq = float(d @ d)
    if d_sq == 0.0:
        return LineSearchResult(beta=0.0, shape=c, evaluation=current, trials=0)

    beta = beta_max
    trials = 0
    while beta >= options.beta_min:
        trials += 1
        try:
            shape = normalized_step(c, d, beta, options.objective)
        except InadmissibleShapeError:
            tracker.record_rejection(RejectionType.INADMISSIBLE)
            beta *= 0.5
            continue
        try:
            trial = objective(shape, B, options.objective, j_hint=current.J)
        except SolverError as exc:
            logger.debug("Trial beta=%.3e failed: %s", beta, exc.message)
            tracker.record_rejection(RejectionType.SOLVER_FAILURE)
            beta *= 0.5
            continue
        if trial.degenerate:
            tracker.record_rejection(RejectionType.DEGENERATE)
        elif trial.J <= current.J - options.armijo * beta * d_sq:
            return LineSearchResult(beta=beta, shape=shape, evaluation=trial, trials=trials)
        else:
            tracker.record_rejection(RejectionType.NO_DECREASE)
        beta *= 0.5
    return LineSearchResult(beta=0.0, shape=c, evaluation=current, trials=trials)


def gradient_descent(
    c0: ShapeCoefficients,
    B: float,
    options: Optional[DescentOptions] = None,
    tracker: Optional[IRejectionTracker] = None,
) -> DescentTrajectory:
    """Minimize J from c0.

    Iterates while i < i_max and |J_i - J_{i-1}| >= eps, or until the line
    search stalls. The first iterate is c0 rescaled to unit volume.

    Raises:
        DescentAbortedError: If a solve fails outside the line search; the
            partial trajectory is attached
    """
    options = options or DescentOptions()
    tracker = tracker or TrackerFactory.create_rejection_tracker()
    tracker.reset()
    settings = options.objective
    trajectory = DescentTrajectory(b_field=B, l_max=c0.l_max, axisymmetric=c0.axisymmetric)
    logger.warning(
        "Descent loop stops when i >= i_max OR |dJ| < eps (conjunctive continuation)"
    )

    c = c0.scaled(settings.shape_volume(c0) ** (-1.0 / 3.0))
    try:
        current = objective_gradient(c, B, settings)
    except MagShapeError as exc:
        raise _aborted(exc, trajectory, tracker) from exc
    trajectory.iterates.append(_iterate(0, c, current, 0.0))

    delta = np.inf
    beta_cap = options.beta_max
    i = 0
    while i < options.i_max and abs(delta) >= options.eps:
        step = line_search(c, current.grad, B, beta_cap, current, options, tracker)
        if step.stalled:
            trajectory.stop_reason = StopReason.LINE_SEARCH_STALL
            break
        try:
            following = objective_gradient(step.shape, B, settings, evaluation=step.evaluation)
        except MagShapeError as exc:
            raise _aborted(exc, trajectory, tracker) from exc
        i += 1
        delta = following.J - current.J
        c, current = step.shape, following
        beta_cap = min(options.beta_max, 2.0 * step.beta)
        trajectory.iterates.append(_iterate(i, c, current, step.beta))
        logger.info(
            "B=%.4g iteration %d: J=%.10g dJ=%.3e beta=%.3e", B, i, current.J, delta, step.beta
        )
    else:
        trajectory.stop_reason = (
            StopReason.MAX_ITER if i >= options.i_max else StopReason.J_CONVERGED
        )

    trajectory.rejections = _rejections(tracker)
    summary = tracker.get_summary()
    if summary:
        logger.info("%s", summary)
    return trajectory


def _iterate(index: int, c: ShapeCoefficients, ev: ObjectiveEval, beta: float) -> DescentIterate:
    return DescentIterate(
        index=index,
        coeffs=np.array(c.coeffs),
        J=ev.J,
        grad_norm=float(np.linalg.norm(ev.grad)) if ev.grad is not None else float("nan"),
        beta=beta,
    )


def _rejections(tracker: IRejectionTracker) -> Dict[str, int]:
    as_dict = getattr(tracker, "as_dict", None)
    return as_dict() if callable(as_dict) else {}


def _aborted(
    exc: MagShapeError, trajectory: DescentTrajectory, tracker: IRejectionTracker
) -> DescentAbortedError:
    trajectory.rejections = _rejections(tracker)
    logger.error("Descent aborted at B=%.4g: %s", trajectory.b_field, exc.message)
    return DescentAbortedError(
        f"gradient descent aborted: {exc.message}",
        trajectory=trajectory,
        details={"cause": exc.error_code, "iterations": len(trajectory.iterates)},
    )
