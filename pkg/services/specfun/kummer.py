"""Kummer's confluent hypergeometric function M(a, b, z) for real arguments.

The series sum_k (a)_k z^k / ((b)_k k!) is summed term by term using the ratio
t_{k+1}/t_k = (a+k) z / ((b+k)(k+1)). Once k >= 2z and that ratio has dropped
below 1/2 every later ratio stays below 1/2 (it decreases while k < -a and is
bounded by z/(k+1) afterwards), so the remaining tail is bounded by the last
term. Arguments above ``KUMMER_EXTENDED_PRECISION_Z`` are summed in extended
precision with Neumaier compensation.

For negative a the terms alternate and may dwarf the sum. The series keeps
sum |t_k| alongside the total; entries where eps * sum |t_k| is not small
against |M| are recomputed with mpmath.

The weighted form e^{-z/2} z^w M(a, b, z) folds the prefactor into the first
term so that it stays finite where M itself overflows.
"""

import logging
import math
from dataclasses import dataclass
from typing import Union

import mpmath
import numpy as np

from services.core.constants import (
    KUMMER_A_RANGE,
    KUMMER_EXTENDED_PRECISION_Z,
    KUMMER_MAX_TERMS,
    KUMMER_MAX_Z,
    KUMMER_MP_DPS,
    KUMMER_REL_TOL,
    KUMMER_ROUNDING_TOL,
)
from services.core.exceptions import SpecFunAccuracyError, SpecFunDomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class SpecFunAccuracy:
    """Truncation controls for series evaluations."""

    rel_tol: float = KUMMER_REL_TOL
    max_terms: int = KUMMER_MAX_TERMS

    def __post_init__(self):
        if not 0.0 < self.rel_tol <= 1e-6:
            raise SpecFunDomainError(
                f"rel_tol must lie in (0, 1e-6], got {self.rel_tol}",
                details={"rel_tol": self.rel_tol},
            )
        if self.max_terms < 100:
            raise SpecFunDomainError(
                f"max_terms must be at least 100, got {self.max_terms}",
                details={"max_terms": self.max_terms},
            )


DEFAULT_ACCURACY = SpecFunAccuracy()


def kummer_m(
    a: ArrayLike, b: ArrayLike, z: ArrayLike, accuracy: SpecFunAccuracy = DEFAULT_ACCURACY
) -> ArrayLike:
    """Evaluate M(a, b, z) for z >= 0.

    Args:
        a: First parameter
        b: Second parameter, not a non-positive integer
        z: Argument in [0, 700]
        accuracy: Series truncation controls

    Returns:
        M(a, b, z) with the broadcast shape of the inputs (a float for scalars).
    """
    return _evaluate(a, b, z, 0.0, accuracy, weighted=False)


def kummer_m_weighted(
    a: ArrayLike,
    b: ArrayLike,
    z: ArrayLike,
    w: ArrayLike = 0.0,
    accuracy: SpecFunAccuracy = DEFAULT_ACCURACY,
) -> ArrayLike:
    """Evaluate e^{-z/2} z^w M(a, b, z); z^0 is taken as 1 at z = 0."""
    return _evaluate(a, b, z, w, accuracy, weighted=True)


def kummer_m_derivative(
    a: ArrayLike, b: ArrayLike, z: ArrayLike, accuracy: SpecFunAccuracy = DEFAULT_ACCURACY
) -> ArrayLike:
    """d/dz M(a, b, z) = (a/b) M(a+1, b+1, z)."""
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    value = (a_arr / b_arr) * np.asarray(kummer_m(a_arr + 1.0, b_arr + 1.0, z, accuracy))
    return _as_output(value)


def _evaluate(a, b, z, w, accuracy: SpecFunAccuracy, weighted: bool) -> ArrayLike:
    a_arr, b_arr, z_arr, w_arr = np.broadcast_arrays(
        np.asarray(a, dtype=float),
        np.asarray(b, dtype=float),
        np.asarray(z, dtype=float),
        np.asarray(w, dtype=float),
    )
    _check_parameters(a_arr, b_arr, z_arr)

    if weighted:
        with np.errstate(divide="ignore", invalid="ignore"):
            log_power = np.where(w_arr == 0.0, 0.0, w_arr * np.log(z_arr))
        log_scale = -0.5 * z_arr + log_power
    else:
        log_scale = np.zeros_like(z_arr)

    if a_arr.ndim == 0:
        value = _series_scalar(
            float(a_arr), float(b_arr), float(z_arr), float(log_scale), accuracy
        )
        return value
    return _series_array(a_arr, b_arr, z_arr, log_scale, accuracy)


def _check_parameters(a: np.ndarray, b: np.ndarray, z: np.ndarray) -> None:
    if np.any((b <= 0) & (b == np.round(b))):
        raise SpecFunDomainError(
            "b must not be a non-positive integer",
            details={"b": np.unique(b[(b <= 0) & (b == np.round(b))])},
        )
    if not np.all(np.isfinite(z)) or np.any(z < 0):
        raise SpecFunDomainError("z must be finite and non-negative")
    if np.any(z > KUMMER_MAX_Z):
        raise SpecFunDomainError(
            f"z exceeds the supported range (max {KUMMER_MAX_Z})",
            details={"z_max": float(np.max(z))},
        )
    if np.any(a < KUMMER_A_RANGE[0]) or np.any(a > KUMMER_A_RANGE[1]):
        raise SpecFunDomainError(
            f"a outside the tested range {KUMMER_A_RANGE}",
            details={"a_min": float(np.min(a)), "a_max": float(np.max(a))},
        )


def _series_scalar(
    a: float, b: float, z: float, log_scale: float, accuracy: SpecFunAccuracy
) -> float:
    if z > KUMMER_EXTENDED_PRECISION_Z:
        value = _series_array(
            np.array([a]), np.array([b]), np.array([z]), np.array([log_scale]), accuracy
        )
        return float(value[0])

    term = math.exp(log_scale)
    total = term
    magnitude = abs(term)
    compensation = 0.0
    for k in range(accuracy.max_terms):
        ratio = (a + k) * z / ((b + k) * (k + 1))
        term *= ratio
        updated = total + term
        if abs(total) >= abs(term):
            compensation += (total - updated) + term
        else:
            compensation += (term - updated) + total
        total = updated
        magnitude += abs(term)
        if k >= 2.0 * z and abs(ratio) < 0.5:
            value = total + compensation
            if abs(term) <= accuracy.rel_tol * abs(value):
                if _cancelled(magnitude, value, np.finfo(float).eps):
                    return _mp_value(a, b, z, log_scale)
                return value
    raise SpecFunAccuracyError(
        f"Kummer series did not converge within {accuracy.max_terms} terms",
        partial_estimate=total + compensation,
        details={"a": a, "b": b, "z": z},
    )


def _series_array(
    a: np.ndarray,
    b: np.ndarray,
    z: np.ndarray,
    log_scale: np.ndarray,
    accuracy: SpecFunAccuracy,
) -> np.ndarray:
    extended = bool(np.any(z > KUMMER_EXTENDED_PRECISION_Z))
    dtype = np.longdouble if extended else np.float64

    a_ = a.astype(dtype)
    b_ = b.astype(dtype)
    z_ = z.astype(dtype)
    term = np.exp(log_scale.astype(dtype))
    total = term.copy()
    magnitude = np.abs(term)
    compensation = np.zeros_like(total)
    converged = np.zeros(total.shape, dtype=bool)

    for k in range(accuracy.max_terms):
        ratio = (a_ + k) * z_ / ((b_ + k) * (k + 1))
        term = term * ratio
        updated = total + term
        compensation += np.where(
            np.abs(total) >= np.abs(term),
            (total - updated) + term,
            (term - updated) + total,
        )
        total = updated
        magnitude += np.abs(term)
        tail_bounded = (k >= 2.0 * z) & (np.abs(ratio) < 0.5)
        small = np.abs(term) <= accuracy.rel_tol * np.abs(total + compensation)
        converged |= tail_bounded & small
        if converged.all():
            value = total + compensation
            return _repair_cancelled(a, b, z, log_scale, value, magnitude, np.finfo(dtype).eps)

    logger.warning(
        f"Kummer series: {int((~converged).sum())} of {converged.size} entries "
        f"did not converge within {accuracy.max_terms} terms"
    )
    raise SpecFunAccuracyError(
        f"Kummer series did not converge within {accuracy.max_terms} terms",
        partial_estimate=np.asarray(total + compensation, dtype=np.float64),
        details={"unconverged": int((~converged).sum())},
    )


def _cancelled(magnitude, value, eps):
    return eps * magnitude > KUMMER_ROUNDING_TOL * abs(value)


def _mp_value(a: float, b: float, z: float, log_scale: float) -> float:
    with mpmath.workdps(KUMMER_MP_DPS):
        return float(mpmath.hyp1f1(a, b, z) * mpmath.exp(log_scale))


def _repair_cancelled(
    a: np.ndarray,
    b: np.ndarray,
    z: np.ndarray,
    log_scale: np.ndarray,
    value: np.ndarray,
    magnitude: np.ndarray,
    eps: float,
) -> np.ndarray:
    bad = _cancelled(magnitude, value, eps)
    result = np.asarray(value, dtype=np.float64)
    if not bad.any():
        return result
    logger.debug("Kummer series: recomputing %d cancelled entries with mpmath", int(bad.sum()))
    for index in zip(*np.nonzero(bad)):
        result[index] = _mp_value(
            float(a[index]), float(b[index]), float(z[index]), float(log_scale[index])
        )
    return result


def _as_output(value: np.ndarray) -> ArrayLike:
    if np.ndim(value) == 0:
        return float(value)
    return value
