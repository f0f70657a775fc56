"""End-to-end minimizer checks against the ball and the optimal cylinder."""

import pytest

from services.core.constants import FABER_KRAHN_BALL, SolverMode
from services.cylinder import optimal_cylinder
from services.geometry import normalize_unit_volume, perturbed_ball, unit_volume_ball
from services.mps3d import SolverOptions, find_eigenvalue
from services.shapeopt import DescentOptions, SweepOptions, gradient_descent, sweep
from services.shapeopt.objective import ObjectiveSettings

ORDERING_GRID = [10.0, 50.0, 100.0, 170.0]
SOLVER_SLACK = 1e-4


@pytest.fixture(scope="module")
def reduced_settings():
    return ObjectiveSettings(solver=SolverOptions(n_target=400))


@pytest.fixture(scope="module")
def axisymmetric_sweep(reduced_settings):
    options = SweepOptions(
        descent=DescentOptions(i_max=80, objective=reduced_settings),
        mode=SolverMode.AXISYM,
        initial=("ball", "prolate"),
    )
    return {record.b_field: record for record in sweep(ORDERING_GRID, options)}


@pytest.mark.slow
class TestFaberKrahnRecovery:
    def test_descent_returns_to_the_ball(self, reduced_settings):
        """Without field a perturbed asymmetric start relaxes to the ball value."""
        start = normalize_unit_volume(perturbed_ball(4, 0.1, seed=1))
        trajectory = gradient_descent(
            start, 0.0, DescentOptions(i_max=200, objective=reduced_settings)
        )
        assert len(trajectory.iterates) <= 201
        assert trajectory.final_J == pytest.approx(FABER_KRAHN_BALL, rel=5e-3)
        assert trajectory.final_J <= trajectory.iterates[0].J


@pytest.mark.slow
class TestMinimizerOrdering:
    def test_below_ball_and_cylinder(self, axisymmetric_sweep):
        for b_field in ORDERING_GRID:
            record = axisymmetric_sweep[b_field]
            assert record.ok, record.error
            ball = find_eigenvalue(unit_volume_ball(l_max=2, axisymmetric=True), b_field).lam
            cylinder = optimal_cylinder(b_field).lambda_star
            assert record.J <= min(ball, cylinder) * (1.0 + SOLVER_SLACK)

    def test_strong_field_minimizer_is_cylinder_like(self, axisymmetric_sweep):
        """At B = 170 the minimizer sits much closer to the optimal cylinder than to the ball."""
        record = axisymmetric_sweep[170.0]
        ball = find_eigenvalue(unit_volume_ball(l_max=2, axisymmetric=True), 170.0).lam
        cylinder = optimal_cylinder(170.0).lambda_star
        assert abs(record.J - cylinder) < abs(record.J - ball)

    def test_elongation_along_the_field(self, axisymmetric_sweep):
        """Heights grow with B (2% slack) and stay above the optimal-cylinder height."""
        heights = [axisymmetric_sweep[b].descriptors.h for b in ORDERING_GRID]
        for lower, upper in zip(heights, heights[1:]):
            assert upper >= 0.98 * lower
        for b_field, h in zip(ORDERING_GRID, heights):
            assert h >= 0.98 * optimal_cylinder(b_field).h_star
