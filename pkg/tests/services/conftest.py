"""Shared solves for the eigenvalue solver tests."""

import pytest

from services.geometry import ball_shape
from services.mps3d import BasisSpec, SolverOptions, find_eigenvalue

# Default axisymmetric basis; without field it switches to the Bessel family
BALL_BASIS = BasisSpec.axisymmetric_default()
BALL_OPTIONS = SolverOptions(n_target=300, scan_points=16)


@pytest.fixture(scope="session")
def unit_ball_solve():
    """Ground state of the unit ball without field; the exact value is pi^2."""
    return find_eigenvalue(
        ball_shape(1.0, l_max=2, axisymmetric=True),
        0.0,
        basis=BALL_BASIS,
        window=(9.0, 10.5),
        options=BALL_OPTIONS,
    )
