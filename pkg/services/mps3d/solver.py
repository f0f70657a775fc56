"""Eigenvalue search: scan sigma(lambda), refine local minima, accept the lowest.

A solve centers the shape at its centroid, picks the Kummer or the Bessel
family, fixes the collocation and interior points once, and then re-assembles
A(lambda) at every trial value because the wave-number spacing depends on lambda.

A refined minimum is only accepted if its eigenfunction also has a small
subspace angle on a second, disjoint set of boundary and interior points.
Near-null directions that exist only on the collocation points are rounding
artifacts of a redundant basis; they are discarded and the scan moves on.
"""

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from services.core.concurrency import run_concurrently
from services.core.constants import (
    AXISYM_N_THETA,
    B_ZERO_SWITCH,
    COLLOCATION_OVERSAMPLING,
    DEFAULT_N_TARGET,
    DEFAULT_THREADS,
    DEGENERACY_GAP,
    FABER_KRAHN_BALL,
    INTERIOR_FACTOR,
    LAMBDA_RTOL,
    LAMBDA_SCAN_POINTS,
    LAMBDA_WINDOW_BALL_FACTOR,
    LAMBDA_WINDOW_WIDENINGS,
    SIGMA_ACCEPT_AXISYM,
    SIGMA_ACCEPT_GENERAL,
    VERIFY_FACTOR,
)
from services.core.exceptions import (
    ConditioningError,
    ConfigError,
    EigenvalueNotFoundError,
)
from services.core.factories import BasisFactory
from services.core.interfaces import CylindricalPoints, IBasisFamily
from services.core.search import bracket_around, golden_section, local_minima
from services.geometry import (
    CollocationSet,
    ShapeCoefficients,
    StarShapedDomain,
    centroid,
    collocation_angles,
    height,
    interior_points,
    volume,
)
from services.mps3d.assembly import SubspaceAngleResult, assemble_matrix, subspace_angle
from services.mps3d.basis import BasisSpec

logger = logging.getLogger(__name__)

# Golden-section iterations per refined minimum
MAX_REFINE_ITER = 120


@dataclass(frozen=True)
class SolverOptions:
    """Tunable parameters of a single eigenvalue solve.

    ``n_target`` and ``sigma_accept`` default by mode when left as None.
    """

    n_target: Optional[int] = None
    scan_points: int = LAMBDA_SCAN_POINTS
    rtol: float = LAMBDA_RTOL
    sigma_accept: Optional[float] = None
    interior_factor: float = INTERIOR_FACTOR
    seed: int = 0
    widenings: int = LAMBDA_WINDOW_WIDENINGS
    threads: int = DEFAULT_THREADS
    center: bool = True

    def __post_init__(self):
        if self.scan_points < 3:
            raise ConfigError(f"scan_points must be at least 3, got {self.scan_points}")
        if not 0 < self.rtol < 1:
            raise ConfigError(f"rtol must lie in (0, 1), got {self.rtol}")
        if self.sigma_accept is not None and not 0 < self.sigma_accept < 1:
            raise ConfigError(f"sigma_accept must lie in (0, 1), got {self.sigma_accept}")
        if self.interior_factor <= 0:
            raise ConfigError("interior_factor must be positive")
        if self.widenings < 0:
            raise ConfigError("widenings must be non-negative")

    def target_for(self, basis: BasisSpec) -> int:
        if self.n_target is not None:
            return self.n_target
        return AXISYM_N_THETA if basis.axisymmetric else DEFAULT_N_TARGET

    def accept_for(self, basis: BasisSpec) -> float:
        if self.sigma_accept is not None:
            return self.sigma_accept
        return SIGMA_ACCEPT_AXISYM if basis.axisymmetric else SIGMA_ACCEPT_GENERAL

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class EigenSolveResult:
    """Accepted eigenpair (lambda, alpha) together with everything needed to evaluate u.

    ``alpha`` has unit Euclidean norm; ``scale`` is the factor applied to the
    coefficient combination when u is evaluated (1 until ``l2_normalize``).
    ``check_sigma`` is the subspace angle of alpha on the fresh point sets.
    """

    lam: float
    alpha: np.ndarray
    sigma: float
    basis: BasisSpec
    b_field: float
    shape: StarShapedDomain
    l_values: np.ndarray
    p_values: np.ndarray
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))
    scale: float = 1.0
    second_sigma: float = 1.0
    check_sigma: float = 0.0
    degenerate: bool = False
    rank: int = 0
    window: Tuple[float, float] = (0.0, 0.0)
    evaluations: int = 0

    @property
    def coefficients(self) -> np.ndarray:
        return self.scale * self.alpha

    def to_dict(self) -> Dict[str, Any]:
        shape_payload = (
            self.shape.to_dict() if isinstance(self.shape, ShapeCoefficients) else None
        )
        return {
            "lambda": self.lam,
            "sigma": self.sigma,
            "second_sigma": self.second_sigma,
            "check_sigma": self.check_sigma,
            "B": self.b_field,
            "basis": self.basis.to_dict(),
            "columns": [[int(l), float(p)] for l, p in zip(self.l_values, self.p_values)],
            "alpha": [[float(a.real), float(a.imag)] for a in self.alpha],
            "scale": self.scale,
            "center": [float(v) for v in self.center],
            "degenerate": self.degenerate,
            "rank": self.rank,
            "window": list(self.window),
            "evaluations": self.evaluations,
            "shape": shape_payload,
        }

    @classmethod
    def from_dict(
        cls, data: Dict[str, Any], shape: Optional[StarShapedDomain] = None
    ) -> "EigenSolveResult":
        try:
            if shape is None:
                if data.get("shape") is None:
                    raise ConfigError("result file carries no shape and none was given")
                shape = ShapeCoefficients.from_dict(data["shape"])
            columns = np.asarray(data["columns"], dtype=float).reshape(-1, 2)
            alpha = np.asarray(data["alpha"], dtype=float).reshape(-1, 2)
            return cls(
                lam=float(data["lambda"]),
                alpha=alpha[:, 0] + 1j * alpha[:, 1],
                sigma=float(data["sigma"]),
                basis=BasisSpec.from_dict(data["basis"]),
                b_field=float(data["B"]),
                shape=shape,
                l_values=columns[:, 0].astype(int),
                p_values=columns[:, 1],
                center=np.asarray(data.get("center", [0.0, 0.0, 0.0]), dtype=float),
                scale=float(data.get("scale", 1.0)),
                second_sigma=float(data.get("second_sigma", 1.0)),
                check_sigma=float(data.get("check_sigma", 0.0)),
                degenerate=bool(data.get("degenerate", False)),
                rank=int(data.get("rank", 0)),
                window=tuple(data.get("window", (0.0, 0.0))),
                evaluations=int(data.get("evaluations", 0)),
            )
        except KeyError as exc:
            raise ConfigError(f"result file is missing key {exc}") from exc


def default_basis(shape: StarShapedDomain) -> BasisSpec:
    if getattr(shape, "axisymmetric", False):
        return BasisSpec.axisymmetric_default()
    return BasisSpec.general()


def lemma_floor(b_field: float, shape: StarShapedDomain) -> float:
    """B + pi^2 / h^2, a lower bound on the ground state."""
    return b_field + math.pi**2 / height(shape) ** 2


def default_window(shape: StarShapedDomain, b_field: float) -> Tuple[float, float]:
    """[floor, floor + 8 lambda_1(equal-volume ball, B=0)], floor slightly relaxed.

    The geometric part of the floor is lowered by 1% to absorb the sampling
    error in the height.
    """
    floor = b_field + 0.99 * (lemma_floor(b_field, shape) - b_field)
    ball = FABER_KRAHN_BALL * volume(shape) ** (-2.0 / 3.0)
    return floor, floor + LAMBDA_WINDOW_BALL_FACTOR * ball


class CollocationProblem:
    """Fixed point sets and basis family for one (shape, B) pair."""

    def __init__(
        self,
        shape: StarShapedDomain,
        b_field: float,
        basis: BasisSpec,
        options: SolverOptions,
    ):
        if basis.axisymmetric and not getattr(shape, "axisymmetric", False):
            raise ConfigError("axisymmetric basis needs an axisymmetric shape")
        if b_field < 0 or not math.isfinite(b_field):
            raise ConfigError(f"field strength must be non-negative, got {b_field}")
        self.shape = shape
        self.b_field = b_field
        self.options = options
        self.center = centroid(shape) if options.center else np.zeros(3)

        self.colloc: CollocationSet = _oversampled_collocation(
            shape, options.target_for(basis), basis
        )
        r_max = float(np.max(np.linalg.norm(self.colloc.points - self.center, axis=1)))
        if not basis.b_zero_mode and 0.5 * b_field * r_max**2 < B_ZERO_SWITCH:
            logger.debug("B r_max^2 / 2 below %.1e; using the Bessel family", B_ZERO_SWITCH)
            basis = replace(basis, b_zero_mode=True)
        self.basis = basis
        self.family: IBasisFamily = BasisFactory.create_family(basis)

        n_interior = max(1, int(math.ceil(options.interior_factor * basis.size)))
        self.interior = interior_points(
            shape, n_interior, seed=options.seed, axisymmetric=basis.axisymmetric
        )
        self.evaluations = 0
        self._fresh: Optional[Tuple[CylindricalPoints, int]] = None

    def _fresh_points(self) -> Tuple[CylindricalPoints, int]:
        if self._fresh is None:
            axisymmetric = self.basis.axisymmetric
            boundary = collocation_angles(
                self.shape, self.colloc.target_count, axisymmetric=axisymmetric, offset=0.5
            )
            inside = interior_points(
                self.shape, len(self.interior), seed=self.options.seed + 1,
                axisymmetric=axisymmetric,
            )
            points = np.vstack([boundary.points, inside]) - self.center[None, :]
            self._fresh = (CylindricalPoints.from_cartesian(points), len(boundary))
        return self._fresh

    def check_sigma(self, lam: float, angle: SubspaceAngleResult, alpha: np.ndarray) -> float:
        """|A_b alpha| / |A alpha| on boundary and interior points disjoint from the solve's."""
        points, n_boundary = self._fresh_points()
        values = self.family.evaluate(
            angle.l_values, angle.p_values, lam, self.b_field, points
        ) @ alpha
        total = float(np.linalg.norm(values))
        if not math.isfinite(total) or total == 0.0:
            return 1.0
        return min(float(np.linalg.norm(values[:n_boundary])) / total, 1.0)

    def angle(self, lam: float) -> SubspaceAngleResult:
        self.evaluations += 1
        system = assemble_matrix(
            self.family, self.basis, self.b_field, lam, self.colloc, self.interior, self.center
        )
        return subspace_angle(system)

    def sigma(self, lam: float) -> float:
        """sigma(lambda), with conditioning failures mapped to the maximal angle."""
        try:
            return self.angle(lam).sigma
        except ConditioningError as exc:
            logger.debug("Conditioning failure at lambda=%.10g: %s", lam, exc.message)
            return 1.0

    def scan(self, grid: np.ndarray) -> np.ndarray:
        values = run_concurrently(
            self.angle, list(grid), threads=self.options.threads, return_exceptions=True
        )
        sigmas = np.ones(len(grid))
        failures = 0
        last_error: Optional[BaseException] = None
        for i, value in enumerate(values):
            if isinstance(value, ConditioningError):
                failures += 1
                last_error = value
            elif isinstance(value, BaseException):
                raise value
            else:
                sigmas[i] = value.sigma
        if failures == len(grid) and last_error is not None:
            raise last_error
        return sigmas


def sigma_curve(
    shape: StarShapedDomain,
    b_field: float,
    lambdas: np.ndarray,
    basis: Optional[BasisSpec] = None,
    options: Optional[SolverOptions] = None,
) -> np.ndarray:
    """sigma(lambda) on an arbitrary grid, for plots and diagnostics."""
    problem = CollocationProblem(
        shape, b_field, basis or default_basis(shape), options or SolverOptions()
    )
    return problem.scan(np.asarray(lambdas, dtype=float))


def _oversampled_collocation(
    shape: StarShapedDomain, n_target: int, basis: BasisSpec
) -> CollocationSet:
    """Collocation points at the requested target, raised until they outnumber the columns.

    With fewer boundary rows than about twice the column count the boundary
    block of Q acquires near-null directions at every lambda.
    """
    colloc = collocation_angles(shape, n_target, axisymmetric=basis.axisymmetric)
    required = int(math.ceil(COLLOCATION_OVERSAMPLING * basis.size))
    target = n_target
    while len(colloc) < required:
        target = int(math.ceil(target * required / len(colloc))) + 1
        colloc = collocation_angles(shape, target, axisymmetric=basis.axisymmetric)
    if target != n_target:
        logger.warning(
            "Collocation target %d gives fewer than %d boundary points for %d columns; using %d",
            n_target, required, basis.size, target,
        )
    return colloc


def find_eigenvalue(
    shape: StarShapedDomain,
    b_field: float,
    basis: Optional[BasisSpec] = None,
    window: Optional[Tuple[float, float]] = None,
    options: Optional[SolverOptions] = None,
) -> EigenSolveResult:
    """Lowest lambda in the window whose refined subspace angle is accepted.

    Args:
        shape: Star-shaped domain
        b_field: Field strength B >= 0
        basis: Particular-solution index set; defaults by the shape's symmetry
        window: Search interval. When omitted the default window is used and
            widened by doubling its width if nothing is accepted
        options: Solver options

    Returns:
        EigenSolveResult: The accepted eigenpair

    Raises:
        ConfigError: If the window is empty or the options are inconsistent
        EigenvalueNotFoundError: If no refined minimum meets sigma_accept on
            both the collocation points and the fresh points
    """
    options = options or SolverOptions()
    problem = CollocationProblem(shape, b_field, basis or default_basis(shape), options)
    widenings = options.widenings if window is None else 0
    lo, hi = window if window is not None else default_window(shape, b_field)
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise ConfigError("eigenvalue window must be a non-empty interval", details={"window": [lo, hi]})

    accept = options.accept_for(problem.basis)
    best_rejected = math.inf
    discarded = 0
    scan_lo = lo
    for attempt in range(widenings + 1):
        grid = np.linspace(scan_lo, hi, options.scan_points)
        sigmas = problem.scan(grid)
        for index in local_minima(sigmas):
            a, b = bracket_around(grid, index)
            refined = golden_section(problem.sigma, a, b, rtol=options.rtol, max_iter=MAX_REFINE_ITER)
            if refined.fx > accept:
                best_rejected = min(best_rejected, refined.fx)
                logger.debug(
                    "Rejected minimum at lambda=%.10g (sigma=%.3e > %.1e)",
                    refined.x, refined.fx, accept,
                )
                continue
            angle = problem.angle(refined.x)
            check = problem.check_sigma(refined.x, angle, angle.alpha)
            if check > VERIFY_FACTOR * accept:
                discarded += 1
                logger.warning(
                    "Discarding minimum at lambda=%.10g: sigma %.3e on the collocation points "
                    "but %.3e on fresh points",
                    refined.x, angle.sigma, check,
                )
                continue
            return _accept(problem, refined.x, angle, check, (lo, hi), grid, sigmas, index, accept)
        logger.info(
            "No accepted eigenvalue in [%.6g, %.6g] (attempt %d/%d)",
            lo, hi, attempt + 1, widenings + 1,
        )
        if attempt < widenings:
            width = hi - lo
            scan_lo, hi = hi, lo + 2.0 * width

    raise EigenvalueNotFoundError(
        "no subspace-angle minimum below the acceptance threshold",
        details={
            "window": [lo, hi],
            "B": b_field,
            "sigma_accept": accept,
            "best_rejected_sigma": None if math.isinf(best_rejected) else best_rejected,
            "discarded_minima": discarded,
        },
    )


def _accept(
    problem: CollocationProblem,
    lam: float,
    angle: SubspaceAngleResult,
    check: float,
    window: Tuple[float, float],
    grid: np.ndarray,
    sigmas: np.ndarray,
    index: int,
    accept: float,
) -> EigenSolveResult:
    degenerate = _second_direction_holds(problem, lam, angle, accept) or _nearby_minimum(
        problem, lam, grid, sigmas, index, accept
    )
    if degenerate:
        logger.warning(
            "Eigenvalue at lambda=%.10g looks degenerate (second sigma %.3e)",
            lam, angle.second_sigma,
        )
    result = EigenSolveResult(
        lam=lam,
        alpha=angle.alpha,
        sigma=angle.sigma,
        basis=problem.basis.snapshot(lam),
        b_field=problem.b_field,
        shape=problem.shape,
        l_values=angle.l_values,
        p_values=angle.p_values,
        center=problem.center,
        second_sigma=angle.second_sigma,
        check_sigma=check,
        degenerate=degenerate,
        rank=angle.rank,
        window=window,
        evaluations=problem.evaluations,
    )
    logger.debug(
        "Accepted lambda=%.12g sigma=%.3e (fresh points %.3e) after %d evaluations",
        lam, angle.sigma, check, problem.evaluations,
    )
    return result


def _second_direction_holds(
    problem: CollocationProblem, lam: float, angle: SubspaceAngleResult, accept: float
) -> bool:
    """Whether the second smallest singular direction is an eigenfunction too."""
    if angle.second_sigma > accept or angle.second_alpha is None:
        return False
    check = problem.check_sigma(lam, angle, angle.second_alpha)
    if check > VERIFY_FACTOR * accept:
        logger.info(
            "Second near-null direction at lambda=%.10g fails on fresh points (%.3e); "
            "treating the eigenvalue as simple",
            lam, check,
        )
        return False
    return True


def _nearby_minimum(
    problem: CollocationProblem,
    lam: float,
    grid: np.ndarray,
    sigmas: np.ndarray,
    index: int,
    accept: float,
) -> bool:
    """Whether another verified minimum lies within the degeneracy gap above lam."""
    candidates: List[int] = [i for i in local_minima(sigmas) if i > index]
    for i in candidates:
        a, b = bracket_around(grid, i)
        if a > lam * (1.0 + DEGENERACY_GAP):
            return False
        refined = golden_section(problem.sigma, a, b, rtol=problem.options.rtol)
        if refined.fx <= accept and abs(refined.x - lam) <= DEGENERACY_GAP * abs(lam):
            angle = problem.angle(refined.x)
            if problem.check_sigma(refined.x, angle, angle.alpha) <= VERIFY_FACTOR * accept:
                return True
    return False
