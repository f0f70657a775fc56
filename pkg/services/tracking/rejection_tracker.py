"""Rejected trial steps of the shape optimizer."""

from enum import Enum
from typing import Dict


class RejectionType(Enum):
    """Why a line-search trial step was not taken."""

    NO_DECREASE = "no_decrease"
    INADMISSIBLE = "inadmissible"
    DEGENERATE = "degenerate"
    SOLVER_FAILURE = "solver_failure"


class RejectionTracker:
    """Counts rejected trial steps by reason over one descent run."""

    def __init__(self) -> None:
        self.reset()

    def reset(self) -> None:
        self._counters = {rejection_type: 0 for rejection_type in RejectionType}

    def record_rejection(self, rejection_type: RejectionType) -> None:
        """Record a rejected trial.

        Args:
            rejection_type: The reason the trial was rejected.
        """
        if rejection_type in self._counters:
            self._counters[rejection_type] += 1
        else:
            raise ValueError(f"Unknown rejection type: {rejection_type}")

    def get_count(self, rejection_type: RejectionType) -> int:
        return self._counters.get(rejection_type, 0)

    @property
    def total(self) -> int:
        return sum(self._counters.values())

    def as_dict(self) -> Dict[str, int]:
        return {rejection_type.value: count for rejection_type, count in self._counters.items()}

    def get_summary(self) -> str:
        """Human-readable summary, or an empty string if nothing was rejected."""
        if self.total == 0:
            return ""

        type_labels = {
            RejectionType.NO_DECREASE: "Insufficient decrease",
            RejectionType.INADMISSIBLE: "Inadmissible shapes",
            RejectionType.DEGENERATE: "Degenerate eigenvalues",
            RejectionType.SOLVER_FAILURE: "Solver failures",
        }
        summary_lines = [f"{self.total} trial step(s) rejected:"]
        for rejection_type, label in type_labels.items():
            count = self._counters[rejection_type]
            if count > 0:
                summary_lines.append(f"  {label}: {count}")
        return "\n".join(summary_lines)
