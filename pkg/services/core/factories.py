"""Factory classes for the pluggable parts of the solver stack.

Basis families, trackers and audit pipelines are created here so callers and
tests can swap implementations without touching the solver.
"""

from typing import Any, cast

from services.core.interfaces import IAuditPipeline, IBasisFamily, IRejectionTracker


class BasisFactory:
    """Factory for particular-solution families."""

    @staticmethod
    def create_family(basis: Any) -> IBasisFamily:
        """Bessel family in field-free mode, Kummer family otherwise."""
        from services.mps3d.basis import BesselBasis, KummerBasis

        if basis.b_zero_mode:
            return BesselBasis()
        return KummerBasis()


class TrackerFactory:
    """Factory for creating tracker instances."""

    @staticmethod
    def create_rejection_tracker() -> IRejectionTracker:
        from services.tracking.rejection_tracker import RejectionTracker

        return cast(IRejectionTracker, RejectionTracker())

    @staticmethod
    def create_sweep_tracker(b_values: Any) -> Any:
        from services.tracking.progress_tracker import SweepProgressTracker

        return SweepProgressTracker(b_values)


class AuditFactory:
    """Factory for a posteriori audit pipelines."""

    @staticmethod
    def create_solve_pipeline() -> IAuditPipeline:
        """Audits applied to every accepted eigenvalue solve."""
        from services.validation.auditors import (
            BoundaryResidualAuditor,
            DiamagneticAuditor,
            HeightFloorAuditor,
            InscribedCylinderAuditor,
            SecondAngleAuditor,
            SigmaAcceptanceAuditor,
        )
        from services.validation.pipeline import AuditPipelineBuilder

        return (
            AuditPipelineBuilder()
            .add_auditor(SigmaAcceptanceAuditor())
            .add_auditor(HeightFloorAuditor())
            .add_auditor(DiamagneticAuditor())
            .add_auditor(BoundaryResidualAuditor())
            .add_auditor(SecondAngleAuditor())
            .add_auditor(InscribedCylinderAuditor())
            .build()
        )
