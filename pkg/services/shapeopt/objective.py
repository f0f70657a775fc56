"""Scale-invariant objective J(c) = |Omega_c|^{2/3} lambda_1(Omega_c, B / |Omega_c|^{2/3}) and its gradient.

The gradient combines three derivatives of the ground state: the Hadamard
boundary integral for the shape, the Hellmann-Feynman formula for the field
and the volume derivative. With V = |Omega_c| and B' = B V^{-2/3},

    dJ/dc_i = (2/3) V^{-1/3} (lambda - B' d_B lambda) dV/dc_i - V^{2/3} H_i,
    H_i = int_{boundary} |du/dn|^2 V_i . n dsigma,

which reduces to the unit-volume formula when V = 1.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from services.core.constants import QUAD_N_RADIAL
from services.core.exceptions import (
    DegenerateEigenvalueError,
    EigenvalueNotFoundError,
    GeometryError,
)
from services.geometry import (
    QuadratureRule,
    ShapeCoefficients,
    surface_quadrature,
    volume,
    volume_gradient,
    volume_quadrature,
)
from services.mps3d import (
    BasisSpec,
    EigenSolveResult,
    NormalDerivative,
    SolverOptions,
    eigenfunction_eval,
    eigenfunction_gradient,
    find_eigenvalue,
    l2_normalize,
    lemma_floor,
    normal_derivative,
)

logger = logging.getLogger(__name__)

# Half-width of a warm-started window, relative to lambda - B
WARM_WINDOW_FRACTION = 0.2
WARM_SCAN_POINTS = 15
# Quadrature orders used inside the optimizer
OPT_QUAD_N_THETA = 32
OPT_QUAD_N_PHI = 64
OPT_QUAD_N_RADIAL = 24


@dataclass
class ObjectiveSettings:
    """Solver and quadrature settings shared by all objective evaluations of a run."""

    basis: Optional[BasisSpec] = None
    solver: SolverOptions = field(default_factory=SolverOptions)
    n_theta: int = OPT_QUAD_N_THETA
    n_phi: int = OPT_QUAD_N_PHI
    n_radial: int = OPT_QUAD_N_RADIAL

    def theta_nodes(self, shape: ShapeCoefficients) -> int:
        """Enough latitudes to integrate r^3 exactly for the shape's degree."""
        return max(self.n_theta, (3 * shape.l_max) // 2 + 2)

    def volume_rule(self, shape: ShapeCoefficients) -> QuadratureRule:
        return volume_quadrature(shape, self.theta_nodes(shape), self.n_phi, self.n_radial)

    def surface_rule(self, shape: ShapeCoefficients) -> QuadratureRule:
        return surface_quadrature(shape, self.theta_nodes(shape), self.n_phi)

    def shape_volume(self, shape: ShapeCoefficients) -> float:
        return volume(shape, self.theta_nodes(shape), self.n_phi)

    def shape_volume_gradient(self, shape: ShapeCoefficients) -> np.ndarray:
        return volume_gradient(shape, self.theta_nodes(shape), self.n_phi)


@dataclass
class ObjectiveEval:
    """J together with the quantities its gradient is assembled from."""

    J: float
    lambda1: float
    vol: float
    b_scaled: float
    solve: EigenSolveResult
    dB_lambda: Optional[float] = None
    grad: Optional[np.ndarray] = None
    hadamard: Optional[np.ndarray] = None
    boundary_discrepancy: Optional[float] = None

    @property
    def degenerate(self) -> bool:
        return bool(self.solve.degenerate)


def _warm_window(shape: ShapeCoefficients, b_scaled: float, vol: float, j_hint: float):
    lam_hint = j_hint * vol ** (-2.0 / 3.0)
    excess = lam_hint - b_scaled
    if excess <= 0:
        return None
    floor = b_scaled + 0.99 * (lemma_floor(b_scaled, shape) - b_scaled)
    lo = max(floor, lam_hint - WARM_WINDOW_FRACTION * excess)
    hi = lam_hint + WARM_WINDOW_FRACTION * excess
    return (lo, hi) if hi > lo else None


def _solve(
    shape: ShapeCoefficients,
    b_scaled: float,
    vol: float,
    settings: ObjectiveSettings,
    j_hint: Optional[float],
) -> EigenSolveResult:
    if j_hint is not None:
        window = _warm_window(shape, b_scaled, vol, j_hint)
        if window is not None:
            warm = replace(settings.solver, scan_points=WARM_SCAN_POINTS, widenings=0)
            try:
                return find_eigenvalue(shape, b_scaled, settings.basis, window, warm)
            except EigenvalueNotFoundError:
                logger.debug("Warm window %s missed; falling back to the default window", window)
    return find_eigenvalue(shape, b_scaled, settings.basis, None, settings.solver)


def objective(
    c: ShapeCoefficients,
    B: float,
    settings: Optional[ObjectiveSettings] = None,
    j_hint: Optional[float] = None,
) -> ObjectiveEval:
    """J(c) without its gradient.

    Args:
        c: Admissible shape, not necessarily of unit volume
        B: Field strength
        settings: Solver and quadrature settings
        j_hint: A nearby value of J used to narrow the eigenvalue window

    Raises:
        SolverError: Propagated from the eigenvalue solve
    """
    settings = settings or ObjectiveSettings()
    vol = settings.shape_volume(c)
    if not vol > 0:
        raise GeometryError("shape has non-positive volume", details={"volume": vol})
    scale = vol ** (2.0 / 3.0)
    b_scaled = B / scale
    solve = _solve(c, b_scaled, vol, settings, j_hint)
    return ObjectiveEval(
        J=scale * solve.lam, lambda1=solve.lam, vol=vol, b_scaled=b_scaled, solve=solve
    )


def hellmann_feynman_dB(
    result: EigenSolveResult, quadrature: Optional[QuadratureRule] = None
) -> float:
    """d lambda / dB = (lambda + B^2 int |A_hat|^2 |u|^2 - int |grad u|^2) / B.

    ``result`` must be L2-normalized. A_hat = (-y, x, 0) / 2 is measured from
    the gauge origin the basis was expanded about.

    Raises:
        DegenerateEigenvalueError: If the solve flagged a multiple eigenvalue
    """
    B = result.b_field
    if B == 0:
        return 0.0
    if result.degenerate:
        raise DegenerateEigenvalueError(
            "field derivative undefined for a degenerate eigenvalue",
            details={"lambda": result.lam, "B": B},
        )
    rule = quadrature or volume_quadrature(result.shape, n_radial=QUAD_N_RADIAL)
    local = rule.points - result.center[None, :]
    a_sq = 0.25 * (local[:, 0] ** 2 + local[:, 1] ** 2)
    density = np.abs(eigenfunction_eval(result, rule.points)) ** 2
    grad_sq = np.sum(np.abs(eigenfunction_gradient(result, rule.points)) ** 2, axis=1)
    potential = float(rule.integrate(a_sq * density))
    kinetic = float(rule.integrate(grad_sq))
    return (result.lam + B**2 * potential - kinetic) / B


def hadamard_gradient(
    result: EigenSolveResult,
    c: ShapeCoefficients,
    quadrature: Optional[QuadratureRule] = None,
) -> np.ndarray:
    """H_i = int |du/dn|^2 Y_i r^2 dcos(theta) dphi for every shape coefficient.

    d lambda / dc_i = -H_i. ``result`` must be L2-normalized.
    """
    _require_simple(result)
    return _hadamard_from(normal_derivative(result, quadrature or surface_quadrature(c)), c)


def _require_simple(result: EigenSolveResult) -> None:
    if result.degenerate:
        raise DegenerateEigenvalueError(
            "shape derivative undefined for a degenerate eigenvalue",
            details={"lambda": result.lam, "second_sigma": result.second_sigma},
        )


def _hadamard_from(nd: NormalDerivative, c: ShapeCoefficients) -> np.ndarray:
    rule = nd.quadrature
    r = np.linalg.norm(rule.points, axis=1)
    return c.harmonics(rule.theta, rule.phi) @ (rule.weights * r**2 * nd.values)


def objective_gradient(
    c: ShapeCoefficients,
    B: float,
    settings: Optional[ObjectiveSettings] = None,
    j_hint: Optional[float] = None,
    evaluation: Optional[ObjectiveEval] = None,
) -> ObjectiveEval:
    """J(c) with its full coefficient gradient.

    An existing value-only ``evaluation`` of the same shape is reused instead
    of solving again.
    """
    settings = settings or ObjectiveSettings()
    ev = evaluation or objective(c, B, settings, j_hint)
    _require_simple(ev.solve)
    volume_rule = settings.volume_rule(c)
    normalized = l2_normalize(ev.solve, volume_rule)
    nd = normal_derivative(normalized, settings.surface_rule(c))

    d_b = hellmann_feynman_dB(normalized, volume_rule)
    hadamard = _hadamard_from(nd, c)
    vol_grad = settings.shape_volume_gradient(c)
    vol = ev.vol
    grad = (2.0 / 3.0) * vol ** (-1.0 / 3.0) * (ev.lambda1 - ev.b_scaled * d_b) * vol_grad
    grad = grad - vol ** (2.0 / 3.0) * hadamard

    discrepancy = nd.discrepancy
    logger.debug(
        "J=%.10g |grad|=%.3e dB_lambda=%.6g boundary discrepancy=%.2e",
        ev.J, float(np.linalg.norm(grad)), d_b, discrepancy,
    )
    ev.solve = normalized
    ev.dB_lambda = d_b
    ev.grad = grad
    ev.hadamard = hadamard
    ev.boundary_discrepancy = discrepancy
    return ev


def finite_difference_gradient(
    c: ShapeCoefficients,
    B: float,
    settings: Optional[ObjectiveSettings] = None,
    step: float = 1e-4,
) -> np.ndarray:
    """Central differences of J in every coefficient, for gradient audits."""
    settings = settings or ObjectiveSettings()
    base = objective(c, B, settings).J
    grad = np.zeros(c.n_coeffs)
    for i in range(c.n_coeffs):
        bump = np.zeros(c.n_coeffs)
        bump[i] = step
        plus = objective(c.with_coeffs(c.coeffs + bump), B, settings, j_hint=base).J
        minus = objective(c.with_coeffs(c.coeffs - bump), B, settings, j_hint=base).J
        grad[i] = (plus - minus) / (2.0 * step)
    if not np.all(np.isfinite(grad)):
        raise GeometryError("finite-difference gradient is not finite")
    return grad


def relative_error(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(float(np.linalg.norm(b)), math.ulp(1.0))
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b))) / scale
