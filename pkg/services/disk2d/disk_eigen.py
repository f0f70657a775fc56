"""Magnetic Dirichlet ground states of planar disks.

Separating variables on the disk D_R with the symmetric gauge, the angular
momentum l sector has eigenfunctions e^{-z/2} z^{|l|/2} M(a, |l|+1, z) e^{il theta}
with z = B r^2 / 2 and a = (l + |l| + 1 - lambda/B) / 2. Eigenvalues are the
values of lambda that put a zero of M at the boundary z = B R^2 / 2.

The search runs in t = -a, i.e. lambda = B (l + |l| + 1 + 2t), so that the
excess lambda - B (l + |l| + 1) = 2 B t keeps full relative precision when it is
exponentially small compared to B.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, NamedTuple

import numpy as np
from scipy.optimize import brentq

from services.core.constants import (
    DISK_ASYMPTOTIC_Z,
    DISK_B_ZERO_THRESHOLD,
    DISK_BISECT_RTOL,
    DISK_L_SCAN,
    DISK_SCAN_POINTS,
    DISK_WINDOW_WIDENINGS,
    KUMMER_A_RANGE,
)
from services.core.exceptions import DomainError, WindowExhaustedError
from services.core.search import first_sign_change
from services.specfun import bessel_j_zero, kummer_m

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiskEigenQuery:
    """Ground state in one angular momentum sector of the disk of radius R."""

    R: float
    B: float
    l: int = 0

    def __post_init__(self):
        if not math.isfinite(self.R) or self.R <= 0:
            raise DomainError(f"disk radius must be positive and finite, got {self.R}")
        if not math.isfinite(self.B) or self.B < 0:
            raise DomainError(f"field strength must be non-negative and finite, got {self.B}")
        if int(self.l) != self.l:
            raise DomainError(f"angular momentum must be an integer, got {self.l}")

    @property
    def landau_floor(self) -> float:
        """B (l + |l| + 1): the Landau level this sector sits above."""
        return self.B * (self.l + abs(self.l) + 1)

    @property
    def kummer_argument(self) -> float:
        return 0.5 * self.B * self.R**2

    @property
    def field_free_value(self) -> float:
        """(j_{|l|,1} / R)^2, the B = 0 limit."""
        return (bessel_j_zero(abs(self.l), 1) / self.R) ** 2

    @property
    def treat_as_field_free(self) -> bool:
        return self.B < DISK_B_ZERO_THRESHOLD / self.R**2


def disk_lambda1(R: float, B: float) -> float:
    """lambda_1(D_R, B), attained in the l = 0 sector."""
    query = DiskEigenQuery(R, B, 0)
    return query.landau_floor + _excess(query)


def disk_lambda1_l(R: float, B: float, l: int) -> float:
    """Lowest eigenvalue in the angular momentum sector l."""
    query = DiskEigenQuery(R, B, l)
    return query.landau_floor + _excess(query)


def disk_lambda1_excess(R: float, B: float, l: int = 0) -> float:
    """lambda - B (l + |l| + 1) without cancellation against B."""
    return _excess(DiskEigenQuery(R, B, l))


def disk_lambda1_asym(B: float) -> float:
    """Two-term large-field expansion B + B^2 e^{-B/(2 pi)} / pi for the unit-area disk."""
    if B <= 0:
        raise DomainError(f"asymptotic expansion needs B > 0, got {B}")
    return B + B**2 * math.exp(-B / (2.0 * math.pi)) / math.pi


def _excess(query: DiskEigenQuery) -> float:
    if query.treat_as_field_free:
        return query.field_free_value - query.landau_floor

    z = query.kummer_argument
    if query.l == 0 and z > DISK_ASYMPTOTIC_Z:
        # B^2 R^2 e^{-B R^2 / 2}; the correction is far below double precision of B
        return query.B**2 * query.R**2 * math.exp(-z)

    b = abs(query.l) + 1.0
    width = (4.0 * query.field_free_value + 10.0 / query.R**2) / (2.0 * query.B)
    t_lo = 0.0
    if query.l == 0:
        # diamagnetic floor, pulled back slightly so the first scan value is positive.
        # Negative sectors gain -B|l| from the angular term and may sit below it.
        floor = 0.5 * (query.field_free_value / query.B - 1.0)
        t_lo = max(0.0, floor - 0.01 * width)

    t_max = -KUMMER_A_RANGE[0]
    if t_lo >= t_max:
        raise DomainError(
            "disk parameters put the Kummer parameter outside its tested range",
            details={"R": query.R, "B": query.B, "l": query.l},
        )

    for attempt in range(DISK_WINDOW_WIDENINGS + 1):
        t = np.linspace(t_lo, min(t_lo + width, t_max), DISK_SCAN_POINTS)
        values = np.asarray(kummer_m(-t, b, z))
        i = first_sign_change(values)
        if i >= 0:
            if values[i] == 0.0:
                return 2.0 * query.B * float(t[i])
            root = brentq(
                lambda s: kummer_m(-s, b, z),
                float(t[i]),
                float(t[i + 1]),
                xtol=np.finfo(float).tiny,
                rtol=DISK_BISECT_RTOL,
            )
            excess = 2.0 * query.B * root
            logger.debug(
                "Disk level R=%.6g B=%.6g l=%d: excess %.12g after %d widenings",
                query.R, query.B, query.l, excess, attempt,
            )
            return excess
        logger.warning(
            "Disk root not bracketed (R=%.6g, B=%.6g, l=%d); widening window",
            query.R, query.B, query.l,
        )
        width *= 2.0

    raise WindowExhaustedError(
        "disk eigenvalue not bracketed within the widened search window",
        details={"R": query.R, "B": query.B, "l": query.l, "lambda_hi": query.landau_floor + 2 * query.B * (t_lo + width)},
    )


class DiskGroundStateAudit(NamedTuple):
    eigenvalues: Dict[int, float]
    minimizing_l: int

    @property
    def ground_state_is_radial(self) -> bool:
        return self.eigenvalues[self.minimizing_l] >= self.eigenvalues.get(0, math.inf)


def ground_state_audit(
    R: float, B: float, l_range: Iterable[int] = DISK_L_SCAN
) -> DiskGroundStateAudit:
    """Lowest eigenvalue per angular momentum; warns when l = 0 is not the minimizer."""
    eigenvalues = {int(l): disk_lambda1_l(R, B, int(l)) for l in l_range}
    minimizing_l = min(eigenvalues, key=lambda l: (eigenvalues[l], abs(l)))
    audit = DiskGroundStateAudit(eigenvalues, minimizing_l)
    if not audit.ground_state_is_radial:
        logger.warning(
            "Disk ground state not in the l = 0 sector: R=%.6g B=%.6g minimizing l=%d",
            R, B, minimizing_l,
        )
    return audit
