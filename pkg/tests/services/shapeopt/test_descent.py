"""Tests for the normalized gradient descent, with a synthetic objective."""

from types import SimpleNamespace
from unittest.mock import patch

import numpy as np
import pytest

from services.core.constants import StopReason
from services.core.exceptions import ConfigError, DescentAbortedError, SolverError
from services.geometry import normalize_unit_volume, perturbed_ball, volume
from services.shapeopt import DescentOptions, gradient_descent, line_search, normalized_step
from services.shapeopt.objective import ObjectiveSettings
from services.tracking.rejection_tracker import RejectionTracker, RejectionType


def anisotropy(shape):
    return float(np.sum(shape.coeffs[1:] ** 2))


def synthetic(direction_scale):
    """J = 10 + |c_{l>0}|^2 with a descent direction proportional to the non-constant part."""

    def evaluate(shape, B, settings=None, j_hint=None, evaluation=None):
        grad = direction_scale * np.array(shape.coeffs)
        grad[0] = 0.0
        return SimpleNamespace(J=10.0 + anisotropy(shape), grad=grad, degenerate=False)

    return evaluate


@pytest.fixture
def start():
    return normalize_unit_volume(perturbed_ball(2, 0.05, seed=3))


class TestNormalizedStep:
    def test_unit_volume(self, start):
        direction = np.zeros(start.n_coeffs)
        direction[1:] = start.coeffs[1:]
        stepped = normalized_step(start, direction, 1.0, ObjectiveSettings())
        assert volume(stepped) == pytest.approx(1.0, rel=1e-12)
        np.testing.assert_allclose(stepped.coeffs[1:], 0.0, atol=1e-15)


class TestLineSearch:
    def test_halves_until_sufficient_decrease(self, start):
        """The full step flips the perturbation; the halved step removes it."""
        evaluate = synthetic(2.0)
        tracker = RejectionTracker()
        current = evaluate(start, 1.0)
        with patch("services.shapeopt.descent.objective", side_effect=evaluate):
            result = line_search(
                start, current.grad, 1.0, 1.0, current, DescentOptions(armijo=0.1), tracker
            )
        assert result.beta == 0.5
        assert result.trials == 2
        assert result.evaluation.J == pytest.approx(10.0)
        assert tracker.get_count(RejectionType.NO_DECREASE) == 1

    def test_zero_direction_stalls(self, start):
        current = SimpleNamespace(J=1.0, grad=np.zeros(start.n_coeffs), degenerate=False)
        result = line_search(start, current.grad, 1.0, 1.0, current)
        assert result.stalled
        assert result.trials == 0

    def test_solver_failures_are_rejections(self, start):
        tracker = RejectionTracker()
        current = synthetic(2.0)(start, 1.0)
        options = DescentOptions(beta_min=0.2)
        with patch("services.shapeopt.descent.objective", side_effect=SolverError("no eigenvalue")):
            result = line_search(start, current.grad, 1.0, 1.0, current, options, tracker)
        assert result.stalled
        assert tracker.get_count(RejectionType.SOLVER_FAILURE) == 3

    def test_degenerate_trials_are_rejected(self, start):
        tracker = RejectionTracker()
        current = synthetic(2.0)(start, 1.0)
        degenerate = SimpleNamespace(J=0.0, grad=None, degenerate=True)
        options = DescentOptions(beta_min=0.5)
        with patch("services.shapeopt.descent.objective", return_value=degenerate):
            result = line_search(start, current.grad, 1.0, 1.0, current, options, tracker)
        assert result.stalled
        assert tracker.get_count(RejectionType.DEGENERATE) == 2

    def test_non_finite_direction(self, start):
        current = SimpleNamespace(J=1.0, grad=None, degenerate=False)
        direction = np.full(start.n_coeffs, np.nan)
        with pytest.raises(ConfigError):
            line_search(start, direction, 1.0, 1.0, current)


class TestGradientDescent:
    def run(self, start, direction_scale, **options):
        evaluate = synthetic(direction_scale)
        with patch("services.shapeopt.descent.objective", side_effect=evaluate), patch(
            "services.shapeopt.descent.objective_gradient", side_effect=evaluate
        ):
            return gradient_descent(start, 1.0, DescentOptions(**options))

    def test_energy_never_increases(self, start):
        trajectory = self.run(start, 0.2, eps=1e-6)
        values = [it.J for it in trajectory.iterates]
        assert all(b <= a for a, b in zip(values, values[1:]))
        assert trajectory.stop_reason == StopReason.J_CONVERGED
        assert anisotropy(trajectory.final_shape) < anisotropy(start)

    def test_first_iterate_is_unit_volume(self, start):
        trajectory = self.run(start, 0.2, i_max=0)
        assert len(trajectory.iterates) == 1
        assert volume(trajectory.final_shape) == pytest.approx(1.0, rel=1e-12)
        assert trajectory.stop_reason == StopReason.MAX_ITER

    def test_iteration_cap(self, start):
        trajectory = self.run(start, 0.2, i_max=5, eps=1e-12)
        assert len(trajectory.iterates) == 6
        assert trajectory.stop_reason == StopReason.MAX_ITER
        assert [it.index for it in trajectory.iterates] == list(range(6))

    def test_step_cap_follows_the_last_step(self, start):
        """An accepted step beta lets the next search start from at most 2 beta."""
        trajectory = self.run(start, 2.0, beta_max=1.0, armijo=0.1)
        assert trajectory.iterates[1].beta == 0.5
        assert trajectory.stop_reason == StopReason.LINE_SEARCH_STALL
        assert trajectory.final_J == pytest.approx(10.0)
        assert trajectory.rejections["no_decrease"] == 1

    def test_failed_initial_solve_aborts(self, start):
        with patch("services.shapeopt.descent.objective_gradient", side_effect=SolverError("boom")):
            with pytest.raises(DescentAbortedError) as excinfo:
                gradient_descent(start, 1.0)
        assert excinfo.value.trajectory.iterates == []
        assert excinfo.value.details["cause"] == "SOLVER_ERROR"

    def test_trajectory_serialization(self, start):
        data = self.run(start, 0.2, i_max=2).to_dict()
        assert data["stop_reason"] == "max_iter"
        assert len(data["iterates"]) == 3
        assert data["l_max"] == start.l_max

    @pytest.mark.parametrize("overrides", [{"i_max": -1}, {"eps": 0.0}, {"beta_max": 1e-9}])
    def test_option_validation(self, overrides):
        with pytest.raises(ConfigError):
            DescentOptions(**overrides)
