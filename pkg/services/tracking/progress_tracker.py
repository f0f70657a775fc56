"""Progress tracking for sweeps over the field strength."""

import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Dict, Iterable, Optional


class SweepPhase(Enum):
    """Phases of a single field-strength row."""

    PENDING = "pending"
    OPTIMIZING = "optimizing"
    COMPLETE = "complete"
    FAILED = "failed"


@dataclass
class RowProgress:
    """Progress of one B value."""

    index: int
    b_field: float
    phase: SweepPhase
    mode: Optional[str] = None
    lambda_star: Optional[float] = None
    error_code: Optional[str] = None
    started_at: Optional[datetime] = None
    completed_at: Optional[datetime] = None

    def to_dict(self) -> dict:
        data = {"index": self.index, "B": self.b_field, "phase": self.phase.value}
        if self.mode is not None:
            data["mode"] = self.mode
        if self.lambda_star is not None:
            data["lambda_star"] = self.lambda_star
        if self.error_code is not None:
            data["error_code"] = self.error_code
        if self.started_at:
            data["started_at"] = self.started_at.isoformat()
        if self.completed_at:
            data["completed_at"] = self.completed_at.isoformat()
        return data


class SweepProgressTracker:
    """Thread-safe progress tracker for a sweep over B."""

    def __init__(self, b_values: Iterable[float]):
        self._rows: Dict[int, RowProgress] = {
            i: RowProgress(index=i, b_field=float(b), phase=SweepPhase.PENDING)
            for i, b in enumerate(b_values)
        }
        self.total_rows = len(self._rows)
        self._lock = threading.Lock()

    def _update(self, index: int, phase: SweepPhase, **fields) -> None:
        with self._lock:
            if index not in self._rows:
                raise ValueError(f"Invalid row index: {index}")
            row = self._rows[index]
            now = datetime.now(timezone.utc)
            if row.phase == SweepPhase.PENDING and phase != SweepPhase.PENDING:
                row.started_at = now
            if phase in (SweepPhase.COMPLETE, SweepPhase.FAILED):
                row.completed_at = now
            row.phase = phase
            for name, value in fields.items():
                setattr(row, name, value)

    def mark_started(self, index: int, mode: str) -> None:
        self._update(index, SweepPhase.OPTIMIZING, mode=mode)

    def mark_complete(self, index: int, lambda_star: float) -> None:
        self._update(index, SweepPhase.COMPLETE, lambda_star=lambda_star)

    def mark_failed(self, index: int, error_code: str) -> None:
        self._update(index, SweepPhase.FAILED, error_code=error_code)

    def get_phase_counts(self) -> Dict[str, int]:
        with self._lock:
            counts = {phase.value: 0 for phase in SweepPhase}
            for row in self._rows.values():
                counts[row.phase.value] += 1
            return counts

    def get_progress_percentage(self) -> int:
        """Share of rows that are finished, successfully or not."""
        with self._lock:
            done = sum(
                1
                for row in self._rows.values()
                if row.phase in (SweepPhase.COMPLETE, SweepPhase.FAILED)
            )
            return round(done / self.total_rows * 100) if self.total_rows > 0 else 0

    def get_progress_data(self) -> dict:
        counts = self.get_phase_counts()
        with self._lock:
            rows = [self._rows[i].to_dict() for i in sorted(self._rows)]
        return {
            "total_rows": self.total_rows,
            "progress_percentage": self.get_progress_percentage(),
            "phase_counts": counts,
            "rows": rows,
        }
