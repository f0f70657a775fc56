"""A posteriori checks on accepted eigenvalue solves."""

import math

import numpy as np

from services.core.constants import FABER_KRAHN_BALL
from services.core.interfaces import AuditContext, AuditFinding, IAuditor
from services.cylinder.optimal_cylinder import cylinder_lambda1
from services.geometry import (
    boundary_sample,
    centroid,
    collocation_angles,
    height,
    interior_points,
    volume,
)

# Boundary-to-interior ratio of |u| accepted by the residual audit
BOUNDARY_RATIO = 1e-3
RESIDUAL_TARGET = 400
RESIDUAL_INTERIOR = 200
# Inscribed-ball radius shrink covering the spacing of the boundary sample
INSCRIBED_SHRINK = 0.98
INSCRIBED_RADII = 12


class SigmaAcceptanceAuditor(IAuditor):
    """The subspace angle lies in [0, sigma_accept]."""

    def audit(self, subject, context: AuditContext) -> AuditFinding:
        sigma = float(subject.sigma)
        return AuditFinding(
            name="sigma_accept",
            passed=0.0 <= sigma <= context.sigma_accept,
            value=sigma,
            bound=context.sigma_accept,
        )


class HeightFloorAuditor(IAuditor):
    """lambda >= B + pi^2 / h^2 up to a relative tolerance."""

    def audit(self, subject, context: AuditContext) -> AuditFinding:
        floor = context.b_field + math.pi**2 / height(subject.shape) ** 2
        lam = float(subject.lam)
        return AuditFinding(
            name="height_floor",
            passed=lam >= floor - context.tolerance * max(abs(floor), 1.0),
            value=lam,
            bound=floor,
            message="ground state below B + pi^2/h^2",
        )


class DiamagneticAuditor(IAuditor):
    """lambda(B) >= max(lambda(0), B).

    lambda(0) is taken from ``additional_data['field_free_lambda']`` when a
    field-free solve is available and from the Faber-Krahn bound otherwise.
    """

    def audit(self, subject, context: AuditContext) -> AuditFinding:
        field_free = context.additional_data.get("field_free_lambda")
        if field_free is None:
            field_free = FABER_KRAHN_BALL * volume(subject.shape) ** (-2.0 / 3.0)
        bound = max(float(field_free), context.b_field)
        lam = float(subject.lam)
        return AuditFinding(
            name="diamagnetic",
            passed=lam >= bound - context.tolerance * max(abs(bound), 1.0),
            value=lam,
            bound=bound,
            message="ground state below the field-free or Landau bound",
        )


class BoundaryResidualAuditor(IAuditor):
    """max |u| on a fresh boundary sample is small against max |u| inside."""

    def __init__(self, ratio: float = BOUNDARY_RATIO):
        self.ratio = ratio

    def audit(self, subject, context: AuditContext) -> AuditFinding:
        from services.mps3d.eigenfunction import eigenfunction_eval

        shape = subject.shape
        axisymmetric = bool(subject.basis.axisymmetric)
        boundary = collocation_angles(shape, RESIDUAL_TARGET, axisymmetric=axisymmetric)
        inside = interior_points(
            shape, RESIDUAL_INTERIOR, seed=context.additional_data.get("seed", 7) + 1,
            axisymmetric=axisymmetric,
        )
        u_boundary = np.max(np.abs(eigenfunction_eval(subject, boundary.points)))
        u_inside = np.max(np.abs(eigenfunction_eval(subject, inside)))
        value = float(u_boundary / u_inside) if u_inside > 0 else math.inf
        return AuditFinding(
            name="boundary_residual",
            passed=value <= self.ratio,
            value=value,
            bound=self.ratio,
            message="eigenfunction does not vanish on the boundary",
        )


class SecondAngleAuditor(IAuditor):
    """A second near-null direction is only allowed on a flagged degenerate solve.

    A spurious null space shows up as a second small singular value that the
    solver did not mark as a genuine multiplicity.
    """

    def audit(self, subject, context: AuditContext) -> AuditFinding:
        second = float(subject.second_sigma)
        degenerate = bool(getattr(subject, "degenerate", False))
        return AuditFinding(
            name="second_angle",
            passed=degenerate or second > context.sigma_accept,
            value=second,
            bound=context.sigma_accept,
            message="second near-null direction on a solve not marked degenerate",
        )


class InscribedCylinderAuditor(IAuditor):
    """lambda is at most the ground state of a cylinder inside the domain.

    The cylinders are inscribed in the largest ball around the expansion center
    that stays inside the boundary sample; domain monotonicity makes the best of
    them an upper bound. A solve above it has locked onto a spurious or excited
    state.
    """

    def __init__(self, radii: int = INSCRIBED_RADII):
        self.radii = radii

    def upper_bound(self, subject, b_field: float) -> float:
        center = getattr(subject, "center", None)
        if center is None:
            center = centroid(subject.shape)
        sample = boundary_sample(subject.shape)
        rho0 = INSCRIBED_SHRINK * float(
            np.min(np.linalg.norm(sample - np.asarray(center)[None, :], axis=1))
        )
        best = math.inf
        for rho in np.linspace(0.2, 0.95, self.radii) * rho0:
            h = 2.0 * math.sqrt(rho0**2 - rho**2)
            best = min(best, cylinder_lambda1(float(rho), h, b_field))
        return best

    def audit(self, subject, context: AuditContext) -> AuditFinding:
        bound = self.upper_bound(subject, context.b_field)
        lam = float(subject.lam)
        return AuditFinding(
            name="inscribed_cylinder",
            passed=lam <= bound + context.tolerance * max(abs(bound), 1.0),
            value=lam,
            bound=bound,
            message="ground state above an inscribed cylinder",
        )
