"""Resolved per-command run configurations.

A configuration starts from the module-level defaults, takes the command-line
flags, and is finally overridden by an optional JSON file. Unknown keys and
out-of-range values are rejected before any computation starts.
"""

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Any, ClassVar, Dict, FrozenSet, List, Optional, Type, TypeVar, Union

import numpy as np
from django.conf import settings

from data.repositories import load_json_file
from services.core.constants import (
    DEFAULT_B_AXI,
    DEFAULT_BETA_MAX,
    DEFAULT_EPS,
    DEFAULT_I_MAX,
    DEFAULT_OVERLAP,
    SolverMode,
)
from services.core.exceptions import ConfigError

C = TypeVar("C", bound="RunConfig")

MIN_N_TARGET = 16
GridSpec = Union[str, List[float]]


def parse_grid(spec: GridSpec) -> np.ndarray:
    """Expand ``lo:hi:step`` (hi included within half a step) or an explicit list.

    Raises:
        ConfigError: On malformed or empty grids
    """
    if isinstance(spec, (list, tuple)):
        values = np.asarray([float(v) for v in spec], dtype=float)
        if values.size == 0:
            raise ConfigError("B grid is empty")
        return values
    parts = str(spec).split(":")
    try:
        numbers = [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"malformed grid {spec!r}, expected lo:hi:step") from exc
    if len(numbers) == 1:
        return np.asarray(numbers)
    if len(numbers) != 3:
        raise ConfigError(f"malformed grid {spec!r}, expected lo:hi:step")
    lo, hi, step = numbers
    if not all(math.isfinite(v) for v in numbers) or step <= 0 or hi < lo:
        raise ConfigError("grid needs lo <= hi and step > 0", details={"grid": spec})
    count = int(math.floor((hi - lo) / step + 0.5))
    # Multiplying instead of accumulating keeps grid values reproducible
    return np.round(lo + step * np.arange(count + 1), 12)


@dataclass
class RunConfig:
    """Settings shared by every command."""

    out: str = ""
    seed: int = 0
    threads: int = 0

    command: ClassVar[str] = "run"
    # Keys that do not change results and are left out of the config hash
    RUNTIME_KEYS: ClassVar[FrozenSet[str]] = frozenset({"out", "threads"})

    def __post_init__(self):
        if not self.out:
            self.out = settings.MAGSHAPE_OUTPUT_DIR
        if self.threads <= 0:
            self.threads = settings.MAGSHAPE_THREADS
        self.validate()

    def validate(self) -> None:
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")

    @classmethod
    def keys(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def build(cls: Type[C], options: Dict[str, Any], config_file: Optional[str] = None) -> C:
        """Merge command-line options with an optional JSON override file."""
        values = {k: v for k, v in options.items() if k in cls.keys() and v is not None}
        if config_file:
            overrides = load_overrides(config_file)
            unknown = sorted(set(overrides) - set(cls.keys()))
            if unknown:
                raise ConfigError(
                    f"unknown configuration keys: {', '.join(unknown)}",
                    details={"unknown": unknown, "allowed": cls.keys()},
                )
            values.update(overrides)
        try:
            return cls(**values)
        except TypeError as exc:
            raise ConfigError(f"invalid configuration: {exc}") from exc

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def config_hash(self) -> str:
        """First 16 hex digits of SHA-256 over the canonical JSON of the result-relevant keys."""
        payload = {k: v for k, v in self.to_dict().items() if k not in self.RUNTIME_KEYS}
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def load_overrides(path: str) -> Dict[str, Any]:
    data = load_json_file(path)
    if not isinstance(data, dict):
        raise ConfigError("config file must contain a JSON object", details={"path": path})
    return {key.replace("-", "_"): value for key, value in data.items()}


def _check_b(b_field: float) -> None:
    if not math.isfinite(b_field) or b_field < 0:
        raise ConfigError(f"B must be a finite non-negative number, got {b_field}")


def _check_mode(mode: str) -> None:
    if mode not in {m.value for m in SolverMode}:
        raise ConfigError(f"unknown solver mode {mode!r}", details={"allowed": [m.value for m in SolverMode]})


def _check_n_target(n_target: Optional[int]) -> None:
    if n_target is not None and n_target < MIN_N_TARGET:
        raise ConfigError(f"n_target must be at least {MIN_N_TARGET}, got {n_target}")


def _check_grid(grid: GridSpec) -> None:
    values = parse_grid(grid)
    if np.any(values < 0) or np.any(np.diff(values) < 0):
        raise ConfigError("B grid must be sorted and non-negative", details={"grid": values.tolist()})


@dataclass
class SolveConfig(RunConfig):
    shape: str = ""
    B: float = 0.0
    mode: str = SolverMode.AUTO.value
    n_target: Optional[int] = None
    n_l: Optional[int] = None
    n_p: Optional[int] = None
    command: ClassVar[str] = "solve"

    def validate(self) -> None:
        super().validate()
        if not self.shape:
            raise ConfigError("a shape file is required")
        _check_b(self.B)
        _check_mode(self.mode)
        _check_n_target(self.n_target)


@dataclass
class CylinderConfig(RunConfig):
    grid: GridSpec = "0:170:0.2"
    verify_l: bool = False
    command: ClassVar[str] = "cylinder"

    def validate(self) -> None:
        super().validate()
        _check_grid(self.grid)


@dataclass
class BallConfig(RunConfig):
    grid: GridSpec = "0:170:10"
    n_target: Optional[int] = None
    command: ClassVar[str] = "ball"

    def validate(self) -> None:
        super().validate()
        _check_grid(self.grid)
        _check_n_target(self.n_target)


@dataclass
class DescentConfig(RunConfig):
    """Settings shared by ``optimize`` and ``sweep``."""

    mode: str = SolverMode.AUTO.value
    n_target: Optional[int] = None
    i_max: int = DEFAULT_I_MAX
    eps: float = DEFAULT_EPS
    beta_max: float = DEFAULT_BETA_MAX
    l_max: Optional[int] = None
    axisym_from: float = DEFAULT_B_AXI

    def validate(self) -> None:
        super().validate()
        _check_mode(self.mode)
        _check_n_target(self.n_target)
        if self.i_max < 0:
            raise ConfigError(f"i_max must be non-negative, got {self.i_max}")
        if self.eps <= 0 or self.beta_max <= 0:
            raise ConfigError("eps and beta_max must be positive")
        if self.l_max is not None and self.l_max < 0:
            raise ConfigError(f"l_max must be non-negative, got {self.l_max}")
        _check_b(self.axisym_from)


@dataclass
class OptimizeConfig(DescentConfig):
    B: float = 0.0
    shape: Optional[str] = None
    initial: str = "ball"
    command: ClassVar[str] = "optimize"

    def validate(self) -> None:
        super().validate()
        _check_b(self.B)


@dataclass
class SweepConfig(DescentConfig):
    grid: GridSpec = "20:170:10"
    overlap: float = DEFAULT_OVERLAP
    initial: List[str] = field(default_factory=lambda: ["ball"])
    command: ClassVar[str] = "sweep"

    def validate(self) -> None:
        super().validate()
        _check_grid(self.grid)
        if self.overlap < 0:
            raise ConfigError(f"overlap must be non-negative, got {self.overlap}")


@dataclass
class ReportConfig(RunConfig):
    sweep_csv: str = "sweep.csv"
    cylinder_csv: str = "cylinder.csv"
    ball_csv: str = "ball.csv"
    command: ClassVar[str] = "report"
