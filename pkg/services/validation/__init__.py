"""A posteriori audits of accepted eigenvalue solves."""

from services.validation.auditors import (
    BoundaryResidualAuditor,
    DiamagneticAuditor,
    HeightFloorAuditor,
    SigmaAcceptanceAuditor,
)
from services.validation.pipeline import AuditPipeline, AuditPipelineBuilder

__all__ = [
    "AuditPipeline",
    "AuditPipelineBuilder",
    "BoundaryResidualAuditor",
    "DiamagneticAuditor",
    "HeightFloorAuditor",
    "SigmaAcceptanceAuditor",
]
