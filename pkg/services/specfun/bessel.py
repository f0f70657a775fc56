"""Bessel functions of the first kind and their zeros."""

from functools import lru_cache
from typing import Union

import numpy as np
from scipy import special

from services.core.exceptions import SpecFunDomainError

ArrayLike = Union[float, np.ndarray]


def bessel_j(nu: int, x: ArrayLike) -> ArrayLike:
    """J_nu(x) for a non-negative integer order."""
    _check_order(nu)
    value = special.jv(nu, np.asarray(x, dtype=float))
    if np.ndim(value) == 0:
        return float(value)
    return value


def bessel_j_derivative(nu: int, x: ArrayLike) -> ArrayLike:
    """J_nu'(x)."""
    _check_order(nu)
    value = special.jvp(nu, np.asarray(x, dtype=float))
    if np.ndim(value) == 0:
        return float(value)
    return value


def bessel_j_over_x(nu: int, x: ArrayLike) -> ArrayLike:
    """J_nu(x)/x with the finite limit at x = 0 (1/2 for nu = 1, 0 for nu >= 2).

    For nu >= 1 uses J_nu(x)/x = (J_{nu-1}(x) + J_{nu+1}(x)) / (2 nu).
    """
    _check_order(nu)
    if nu == 0:
        raise SpecFunDomainError("J_0(x)/x is singular at x = 0")
    x_arr = np.asarray(x, dtype=float)
    value = (special.jv(nu - 1, x_arr) + special.jv(nu + 1, x_arr)) / (2.0 * nu)
    if np.ndim(value) == 0:
        return float(value)
    return value


def bessel_j_zero(nu: int, k: int) -> float:
    """k-th positive zero of J_nu."""
    _check_order(nu)
    if int(k) != k or k < 1:
        raise SpecFunDomainError(f"zero index must be a positive integer, got {k}")
    return float(_zeros(int(nu), int(k))[int(k) - 1])


@lru_cache(maxsize=128)
def _zeros(nu: int, count: int) -> np.ndarray:
    return special.jn_zeros(nu, count)


def _check_order(nu: int) -> None:
    if int(nu) != nu or nu < 0:
        raise SpecFunDomainError(f"order must be a non-negative integer, got {nu}")
