"""Progress and rejection tracking for optimizer runs."""

from services.tracking.progress_tracker import RowProgress, SweepPhase, SweepProgressTracker
from services.tracking.rejection_tracker import RejectionTracker, RejectionType

__all__ = [
    "RejectionTracker",
    "RejectionType",
    "RowProgress",
    "SweepPhase",
    "SweepProgressTracker",
]
