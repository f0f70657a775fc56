from services.core.factories import AuditFactory, BasisFactory, TrackerFactory
from services.core.interfaces import (
    AuditContext,
    AuditFinding,
    CylindricalPoints,
    IArtifactRepository,
    IAuditor,
    IAuditPipeline,
    IBasisFamily,
    IRejectionTracker,
)

__all__ = [
    # Interfaces
    "IArtifactRepository",
    "IAuditPipeline",
    "IAuditor",
    "IBasisFamily",
    "IRejectionTracker",
    # Value types
    "AuditContext",
    "AuditFinding",
    "CylindricalPoints",
    # Factories
    "AuditFactory",
    "BasisFactory",
    "TrackerFactory",
]
