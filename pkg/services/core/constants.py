"""Configuration and constants for the magnetic shape optimizer."""

import math
import os
from enum import Enum

# Special-function tolerances
KUMMER_REL_TOL = 1e-14
KUMMER_MAX_TERMS = 5000
# Above this argument the series is summed in extended precision
KUMMER_EXTENDED_PRECISION_Z = 50.0
KUMMER_MAX_Z = 700.0
# Operating range the Kummer evaluation is tested on
KUMMER_A_RANGE = (-1.0e5, 1.0e4)
# Entries whose rounding bound eps * sum|t_k| exceeds this share of |M| are
# recomputed in arbitrary precision
KUMMER_ROUNDING_TOL = 1e-8
KUMMER_MP_DPS = 40

J01 = 2.404825557695773

# Geometry
DEFAULT_L_MAX = 10
DEFAULT_L_MAX_AXISYM = 60
ADMISSIBILITY_GRID = (181, 360)
QUAD_N_THETA = 64
QUAD_N_PHI = 128
QUAD_N_RADIAL = 48
DESCRIPTOR_GRID = (121, 240)
DEFAULT_CYLINDER_FIT_L_MAX = 30

# Disk root search
DISK_SCAN_POINTS = 200
DISK_BISECT_RTOL = 1e-12
DISK_WINDOW_WIDENINGS = 6
DISK_B_ZERO_THRESHOLD = 1e-4
DISK_L_SCAN = tuple(range(-3, 4))
# Above this value of B R^2 / 2 the l = 0 disk level uses its exponential asymptotics
DISK_ASYMPTOTIC_Z = 600.0

# Optimal cylinder
CYLINDER_SCAN_POINTS = 61
CYLINDER_H_MIN = 0.05
CYLINDER_GSS_RTOL = 1e-10
CYLINDER_AUDIT_POINTS = 50

# Method of particular solutions
DEFAULT_N_L = 10
DEFAULT_N_P = 8
DEFAULT_DP_MULTIPLIER = 1.0
AXISYM_N_P = 60
AXISYM_DP_MULTIPLIER = 10.0
DEFAULT_N_TARGET = 1000
AXISYM_N_THETA = 1000
SIGMA_ACCEPT_GENERAL = 1e-3
SIGMA_ACCEPT_AXISYM = 1e-5
LAMBDA_SCAN_POINTS = 60
LAMBDA_RTOL = 1e-8
LAMBDA_WINDOW_WIDENINGS = 4
LAMBDA_WINDOW_BALL_FACTOR = 8.0
# Relative λ-gap under which two accepted σ minima count as one degenerate level
DEGENERACY_GAP = 1e-3
B_ZERO_SWITCH = 1e-3
INTERIOR_FACTOR = 2
INTERIOR_RHO_RANGE = (0.2, 0.9)
# Pivots of R below this share of |R_00| are dropped from the column space
RANK_TOL = 1e-10
# Kummer columns whose e^{-zeta/2} M grows by more than this across the shape are dropped
KUMMER_GROWTH_CAP = 1e10
# Boundary rows per basis column
COLLOCATION_OVERSAMPLING = 2.0
# An accepted minimum must keep sigma within this factor of sigma_accept on fresh points
VERIFY_FACTOR = 10.0

# Optimizer
DEFAULT_I_MAX = 200
DEFAULT_EPS = 1e-7
DEFAULT_BETA_MAX = 1.0
BETA_MIN = 1e-8
ARMIJO_C = 1e-4
DEFAULT_B_AXI = 44.0
DEFAULT_OVERLAP = 6.0

# Closed forms
FABER_KRAHN_BALL = math.pi**2 * (4.0 * math.pi / 3.0) ** (2.0 / 3.0)
BALL_CONSTANT = math.pi ** (8.0 / 3.0) / 6.0 ** (2.0 / 3.0)

# Runtime configuration
DEFAULT_THREADS = int(os.environ.get("MAGSHAPE_THREADS", "1"))
CODE_VERSION = "1.0.0"


class SolverMode(Enum):
    GENERAL = "general"
    AXISYM = "axisym"
    AUTO = "auto"


class StopReason(Enum):
    MAX_ITER = "max_iter"
    J_CONVERGED = "J_converged"
    LINE_SEARCH_STALL = "line_search_stall"


class ExitCode(Enum):
    SUCCESS = 0
    CONFIG_ERROR = 2
    SOLVER_FAILURE = 3
    PARTIAL_SWEEP = 4
