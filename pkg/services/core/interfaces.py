"""Abstract base classes and shared value types for the solver stack.

Particular-solution families, audit steps and trackers are consumed through
these interfaces so that the eigenvalue solver and the optimizer do not depend
on concrete implementations.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np


@dataclass(frozen=True)
class CylindricalPoints:
    """Points in cylindrical coordinates (r, angle, z) relative to the field axis."""

    r: np.ndarray
    angle: np.ndarray
    z: np.ndarray

    @classmethod
    def from_cartesian(cls, points: np.ndarray) -> "CylindricalPoints":
        points = np.asarray(points, dtype=float).reshape(-1, 3)
        x, y, z = points[:, 0], points[:, 1], points[:, 2]
        return cls(r=np.hypot(x, y), angle=np.arctan2(y, x), z=z)

    def __len__(self) -> int:
        return int(self.r.shape[0])


@dataclass
class AuditContext:
    """Context passed through the audit pipeline."""

    b_field: float
    sigma_accept: float
    tolerance: float = 1e-6
    additional_data: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class AuditFinding:
    """Outcome of a single a posteriori audit."""

    name: str
    passed: bool
    value: float
    bound: float
    message: str = ""


class IBasisFamily(ABC):
    """A family of particular solutions indexed by angular momentum l and wave number p."""

    @abstractmethod
    def evaluate(
        self,
        l_values: np.ndarray,
        p_values: np.ndarray,
        lam: float,
        b_field: float,
        points: CylindricalPoints,
    ) -> np.ndarray:
        """Evaluate every (l, p) column at every point.

        Returns:
            Complex array of shape (n_points, n_columns).
        """

    @abstractmethod
    def gradient(
        self,
        l_values: np.ndarray,
        p_values: np.ndarray,
        lam: float,
        b_field: float,
        points: CylindricalPoints,
    ) -> np.ndarray:
        """Cartesian gradients of every column.

        Returns:
            Complex array of shape (n_points, n_columns, 3).
        """

    @abstractmethod
    def admissible_p(self, p_values: np.ndarray, lam: float) -> np.ndarray:
        """Boolean mask of wave numbers usable at this eigenvalue guess."""

    def resolvable(
        self,
        l_values: np.ndarray,
        p_values: np.ndarray,
        lam: float,
        b_field: float,
        r_max: float,
    ) -> np.ndarray:
        """Boolean mask of columns whose radial factor double precision can resolve up to r_max."""
        return np.ones(np.shape(p_values), dtype=bool)


class IAuditor(ABC):
    """Interface for a posteriori checks on accepted solves."""

    @abstractmethod
    def audit(self, subject: Any, context: AuditContext) -> AuditFinding:
        """Check ``subject`` and return a finding."""


class IAuditPipeline(ABC):
    """Interface for chaining auditors."""

    @abstractmethod
    def add_auditor(self, auditor: IAuditor) -> None:
        """Add an auditor to the pipeline."""

    @abstractmethod
    def run(self, subject: Any, context: AuditContext) -> List[AuditFinding]:
        """Run all auditors and return their findings."""


class IRejectionTracker(ABC):
    """Interface for counting rejected optimizer trial steps."""

    @abstractmethod
    def record_rejection(self, rejection_type: Any) -> None:
        """Record a rejected trial step."""

    @abstractmethod
    def get_summary(self) -> str:
        """Get a human-readable summary."""

    @abstractmethod
    def reset(self) -> None:
        """Reset all counters."""


class IArtifactRepository(ABC):
    """Abstract interface for persisted run artifacts."""

    @abstractmethod
    def save_json(self, name: str, payload: Dict[str, Any]) -> str:
        """Persist a JSON document and return its path."""

    @abstractmethod
    def load_json(self, name: str) -> Dict[str, Any]:
        """Load a JSON document."""

    @abstractmethod
    def write_csv(
        self,
        name: str,
        columns: List[str],
        rows: List[Dict[str, Any]],
        config_hash: str,
    ) -> str:
        """Write a CSV table with header and provenance comment."""

    @abstractmethod
    def read_csv(self, name: str) -> Tuple[Dict[str, str], List[Dict[str, str]]]:
        """Read a CSV table, returning (provenance, rows)."""

    @abstractmethod
    def write_obj(self, name: str, vertices: np.ndarray, faces: np.ndarray) -> str:
        """Write an ASCII OBJ mesh."""

    @abstractmethod
    def exists(self, name: str) -> bool:
        """Check whether an artifact exists."""

    @abstractmethod
    def path_for(self, name: str) -> str:
        """Absolute path of a named artifact."""
