"""Error hierarchy and machine-readable error reporting.

Every failure raised by the library carries a stable error code, the process
exit code a command should terminate with, and a details dictionary that is
safe to serialize. ``ErrorClassifier`` turns arbitrary exceptions into this
hierarchy so that commands always report structured errors.
"""

import json
import logging
from typing import Any, Dict, Optional

import numpy as np

from services.core.constants import ExitCode

logger = logging.getLogger(__name__)


class MagShapeError(Exception):
    """Base class for all errors raised by the solver stack."""

    default_exit_code = ExitCode.SOLVER_FAILURE

    def __init__(
        self,
        message: str,
        exit_code: Optional[ExitCode] = None,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.message = message
        self.exit_code = exit_code or self.default_exit_code
        self.error_code = error_code or _error_code_for(self.__class__)
        self.details = details or {}
        super().__init__(message)

    def to_payload(self) -> Dict[str, Any]:
        """Return the machine-readable representation of this error."""
        return {
            "error_code": self.error_code,
            "message": self.message,
            "exit_code": self.exit_code.value,
            "details": _jsonable(self.details),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), sort_keys=True)


def _error_code_for(cls: type) -> str:
    name = cls.__name__
    if name.endswith("Error"):
        name = name[: -len("Error")]
    chars = []
    for i, ch in enumerate(name):
        if ch.isupper() and i > 0:
            chars.append("_")
        chars.append(ch.upper())
    return "".join(chars) + "_ERROR"


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


class ConfigError(MagShapeError):
    """Invalid configuration, arguments or input files."""

    default_exit_code = ExitCode.CONFIG_ERROR


class DomainError(MagShapeError):
    """Operation called with arguments outside its mathematical domain."""


class SpecFunDomainError(DomainError):
    """Special function called outside its domain or tested range."""


class SpecFunAccuracyError(MagShapeError):
    """Series did not converge within the term budget."""

    def __init__(
        self,
        message: str,
        partial_estimate: Any = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.partial_estimate = partial_estimate
        super().__init__(message, details=details)


class GeometryError(MagShapeError):
    """Degenerate geometric quantity, e.g. a vanishing surface frame."""


class InadmissibleShapeError(GeometryError):
    """Radius function is not strictly positive."""


class SolverError(MagShapeError):
    """Numerical solver failure."""


class WindowExhaustedError(SolverError):
    """Root or eigenvalue not bracketed within the (widened) search window."""


class EigenvalueNotFoundError(SolverError):
    """No subspace-angle minimum below the acceptance threshold."""


class ConditioningError(SolverError):
    """Basis matrix is numerically rank deficient beyond tolerance."""


class DegenerateEigenvalueError(SolverError):
    """Eigenvalue is (numerically) multiple, shape derivatives undefined."""


class DescentAbortedError(SolverError):
    """Gradient descent aborted; carries the partial trajectory."""

    def __init__(
        self,
        message: str,
        trajectory: Any = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.trajectory = trajectory
        super().__init__(message, details=details)


class PartialSweepError(MagShapeError):
    """Some rows of a sweep failed while others completed."""

    default_exit_code = ExitCode.PARTIAL_SWEEP


class ErrorClassifier:
    """Maps arbitrary exceptions onto the ``MagShapeError`` hierarchy."""

    @classmethod
    def classify(cls, exception: BaseException) -> MagShapeError:
        """Convert any exception into a structured error.

        Args:
            exception: The exception caught at a command boundary

        Returns:
            MagShapeError: The exception itself if already structured, otherwise
            a ``ConfigError`` for input problems or a ``SolverError``.
        """
        if isinstance(exception, MagShapeError):
            return exception

        exception_type = type(exception).__name__
        details = {"exception_type": exception_type}

        if isinstance(exception, FileNotFoundError):
            filename = getattr(exception, "filename", None)
            return ConfigError(
                f"Input file not found: {filename or exception}",
                details={**details, "path": filename},
            )

        if cls._is_input_error(exception):
            return ConfigError(f"Invalid input: {exception}", details=details)

        if isinstance(exception, (np.linalg.LinAlgError, FloatingPointError)):
            return SolverError(f"Linear algebra failure: {exception}", details=details)

        logger.error(f"Uncategorized exception: {exception_type}: {exception}")
        return SolverError(f"Unexpected failure: {exception}", details=details)

    @classmethod
    def _is_input_error(cls, exception: BaseException) -> bool:
        return isinstance(
            exception, (json.JSONDecodeError, KeyError, ValueError, TypeError)
        )
