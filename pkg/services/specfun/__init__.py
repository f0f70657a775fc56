"""Special functions used by the disk, cylinder and particular-solution solvers."""

from services.specfun.bessel import (
    bessel_j,
    bessel_j_derivative,
    bessel_j_over_x,
    bessel_j_zero,
)
from services.specfun.harmonics import (
    assoc_legendre,
    harmonic_count,
    harmonic_index,
    harmonic_lm,
    real_sph_harm,
    real_sph_harm_all,
    real_sph_harm_all_derivatives,
    zonal_harm_all,
)
from services.specfun.kummer import (
    DEFAULT_ACCURACY,
    SpecFunAccuracy,
    kummer_m,
    kummer_m_derivative,
    kummer_m_weighted,
)

__all__ = [
    "DEFAULT_ACCURACY",
    "SpecFunAccuracy",
    "assoc_legendre",
    "bessel_j",
    "bessel_j_derivative",
    "bessel_j_over_x",
    "bessel_j_zero",
    "harmonic_count",
    "harmonic_index",
    "harmonic_lm",
    "kummer_m",
    "kummer_m_derivative",
    "kummer_m_weighted",
    "real_sph_harm",
    "real_sph_harm_all",
    "real_sph_harm_all_derivatives",
    "zonal_harm_all",
]
