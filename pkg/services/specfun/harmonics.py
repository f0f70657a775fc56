"""Associated Legendre functions and real spherical harmonics.

Conventions:
    P_l^m carries the Condon-Shortley phase (-1)^m.
    Real harmonics are Y_l^0 for m = 0, sqrt(2) Re Y_l^m for m > 0 and
    sqrt(2) Im Y_l^{|m|} for m < 0, orthonormal on the unit sphere.
    Harmonic vectors are ordered (0,0), (1,-1), (1,0), (1,1), (2,-2), ...
    so that (l, m) sits at index l^2 + l + m.
"""

import math
from typing import Tuple

import numpy as np
from scipy.special import gammaln

from services.core.exceptions import SpecFunDomainError

SQRT2 = math.sqrt(2.0)


def harmonic_index(l: int, m: int) -> int:
    if l < 0 or abs(m) > l:
        raise SpecFunDomainError(f"invalid harmonic index (l={l}, m={m})")
    return l * l + l + m


def harmonic_lm(index: int) -> Tuple[int, int]:
    if index < 0:
        raise SpecFunDomainError(f"invalid harmonic position {index}")
    l = math.isqrt(index)
    return l, index - l * l - l


def harmonic_count(l_max: int) -> int:
    return (l_max + 1) ** 2


def normalized_legendre(l_max: int, x: np.ndarray) -> np.ndarray:
    """Fully normalized P̄_l^m(x) = N_lm P_l^m(x) for 0 <= m <= l <= l_max.

    N_lm = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!), so that P̄_l^m(cos t) e^{i m phi}
    is the complex spherical harmonic Y_l^m. The returned array has shape
    (l_max + 1, l_max + 2, *x.shape); the extra m column is identically zero
    and keeps the theta-derivative recurrence branch free.
    """
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + 1e-12):
        raise SpecFunDomainError("Legendre argument outside [-1, 1]")
    x = np.clip(x, -1.0, 1.0)
    s = np.sqrt(np.maximum(0.0, 1.0 - x * x))

    p = np.zeros((l_max + 1, l_max + 2) + x.shape)
    p[0, 0] = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(l_max + 1):
        if m > 0:
            p[m, m] = -math.sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * p[m - 1, m - 1]
        if m + 1 <= l_max:
            p[m + 1, m] = math.sqrt(2.0 * m + 3.0) * x * p[m, m]
        for l in range(m + 2, l_max + 1):
            a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            p[l, m] = a * (x * p[l - 1, m] - b * p[l - 2, m])
    return p


def normalized_legendre_dtheta(p: np.ndarray) -> np.ndarray:
    """d/dtheta of P̄_l^m(cos theta) from the table returned by ``normalized_legendre``."""
    l_max = p.shape[0] - 1
    dp = np.zeros_like(p)
    for l in range(1, l_max + 1):
        dp[l, 0] = math.sqrt(l * (l + 1.0)) * p[l, 1]
        for m in range(1, l + 1):
            up = math.sqrt((l + m + 1.0) * (l - m)) * p[l, m + 1]
            down = math.sqrt((l + m) * (l - m + 1.0)) * p[l, m - 1]
            dp[l, m] = 0.5 * (up - down)
    return dp


def assoc_legendre(l: int, m: int, x: float) -> float:
    """P_l^m(x) with the Condon-Shortley phase."""
    if l < 0 or m < 0 or m > l:
        raise SpecFunDomainError(f"invalid Legendre index (l={l}, m={m})")
    p = normalized_legendre(l, np.asarray(x, dtype=float))
    log_norm = 0.5 * (
        math.log((2.0 * l + 1.0) / (4.0 * math.pi)) + gammaln(l - m + 1) - gammaln(l + m + 1)
    )
    value = p[l, m] / math.exp(log_norm)
    return float(value) if np.ndim(value) == 0 else value


def real_sph_harm(l: int, m: int, theta, phi):
    """Single real spherical harmonic Ỹ_l^m(theta, phi)."""
    if l < 0 or abs(m) > l:
        raise SpecFunDomainError(f"invalid harmonic index (l={l}, m={m})")
    theta, phi = np.broadcast_arrays(
        np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
    )
    p = normalized_legendre(l, np.cos(theta))
    value = _combine(p[l, abs(m)], m, phi)
    return float(value) if np.ndim(value) == 0 else value


def real_sph_harm_all(l_max: int, theta, phi) -> np.ndarray:
    """All Ỹ_l^m up to l_max; shape ((l_max+1)^2, *broadcast shape)."""
    theta, phi = np.broadcast_arrays(
        np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
    )
    p = normalized_legendre(l_max, np.cos(theta))
    out = np.empty((harmonic_count(l_max),) + theta.shape)
    for l in range(l_max + 1):
        for m in range(-l, l + 1):
            out[harmonic_index(l, m)] = _combine(p[l, abs(m)], m, phi)
    return out


def real_sph_harm_all_derivatives(
    l_max: int, theta, phi
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(Ỹ, dỸ/dtheta, dỸ/dphi) for all harmonics up to l_max."""
    theta, phi = np.broadcast_arrays(
        np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
    )
    p = normalized_legendre(l_max, np.cos(theta))
    dp = normalized_legendre_dtheta(p)
    shape = (harmonic_count(l_max),) + theta.shape
    values, d_theta, d_phi = np.empty(shape), np.empty(shape), np.empty(shape)
    for l in range(l_max + 1):
        for m in range(-l, l + 1):
            i = harmonic_index(l, m)
            am = abs(m)
            values[i] = _combine(p[l, am], m, phi)
            d_theta[i] = _combine(dp[l, am], m, phi)
            if m > 0:
                d_phi[i] = -SQRT2 * m * p[l, am] * np.sin(m * phi)
            elif m < 0:
                d_phi[i] = SQRT2 * am * p[l, am] * np.cos(am * phi)
            else:
                d_phi[i] = 0.0
    return values, d_theta, d_phi


def zonal_harm_all(l_max: int, theta) -> Tuple[np.ndarray, np.ndarray]:
    """(Ỹ_l^0, dỸ_l^0/dtheta) for l = 0..l_max; shape (l_max+1, *theta.shape)."""
    theta = np.asarray(theta, dtype=float)
    p = normalized_legendre(l_max, np.cos(theta))
    dp = normalized_legendre_dtheta(p)
    return p[:, 0].copy(), dp[:, 0].copy()


def _combine(p_lm: np.ndarray, m: int, phi: np.ndarray) -> np.ndarray:
    if m > 0:
        return SQRT2 * p_lm * np.cos(m * phi)
    if m < 0:
        return SQRT2 * p_lm * np.sin(-m * phi)
    return p_lm * np.ones_like(phi)
