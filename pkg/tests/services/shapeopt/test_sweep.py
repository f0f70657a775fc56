"""Tests for the field-strength sweep, with the descent replaced by a stub."""

import importlib
from unittest.mock import patch

import numpy as np
import pytest

from data.schemas import SWEEP_COLUMNS
from services.core.constants import SolverMode, StopReason
from services.core.exceptions import ConfigError, SolverError
from services.geometry import Descriptors, volume
from services.shapeopt import INITIAL_KINDS, SweepOptions, initial_shapes, sweep
from services.shapeopt.descent import DescentIterate, DescentTrajectory
from services.tracking.progress_tracker import SweepProgressTracker

FIXED_DESCRIPTORS = Descriptors(h=1.5, R=0.9, diam=1.6, r_in=0.4)


class StubDescent:
    """Returns the start shape unchanged with J = B + 10 (+ 0.5 in axisymmetric mode)."""

    def __init__(self, fail_at=()):
        self.fail_at = set(fail_at)
        self.calls = []

    def __call__(self, start, b_field, options):
        self.calls.append((b_field, start))
        if b_field in self.fail_at:
            raise SolverError("no eigenvalue", details={"B": b_field})
        J = b_field + 10.0 + (0.5 if start.axisymmetric else 0.0)
        trajectory = DescentTrajectory(b_field, start.l_max, start.axisymmetric)
        trajectory.iterates.append(DescentIterate(0, np.array(start.coeffs), J, 0.0, 0.0))
        trajectory.stop_reason = StopReason.MAX_ITER
        return trajectory


def run_sweep(grid, stub, **options):
    # services.shapeopt re-exports the sweep() function, which shadows the
    # submodule for dotted-path patch targets; patch the module object itself
    sweep_module = importlib.import_module("services.shapeopt.sweep")
    with patch.object(sweep_module, "gradient_descent", side_effect=stub), patch.object(
        sweep_module, "descriptors", return_value=FIXED_DESCRIPTORS
    ):
        tracker = SweepProgressTracker(grid)
        return sweep(grid, SweepOptions(**options), tracker), tracker


class TestInitialShapes:
    @pytest.mark.parametrize("kind", INITIAL_KINDS)
    def test_unit_volume(self, kind):
        shape = initial_shapes(kind, l_max=6)
        assert volume(shape) == pytest.approx(1.0, rel=1e-10)
        assert shape.l_max == 6

    def test_axisymmetric(self):
        shape = initial_shapes("prolate", l_max=8, axisymmetric=True)
        assert shape.axisymmetric
        assert shape.n_coeffs == 9

    def test_random_is_seeded(self):
        a = initial_shapes("random", l_max=4, seed=1)
        b = initial_shapes("random", l_max=4, seed=2)
        assert not np.array_equal(a.coeffs, b.coeffs)

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            initial_shapes("cube")


class TestSweepOptions:
    def test_mode_schedule(self):
        options = SweepOptions(b_axi=44.0, overlap=6.0)
        assert options.modes_for(30.0) == [SolverMode.GENERAL]
        assert options.modes_for(44.0) == [SolverMode.GENERAL, SolverMode.AXISYM]
        assert options.modes_for(49.9) == [SolverMode.GENERAL, SolverMode.AXISYM]
        assert options.modes_for(50.0) == [SolverMode.AXISYM]

    def test_fixed_mode(self):
        assert SweepOptions(mode=SolverMode.GENERAL).modes_for(100.0) == [SolverMode.GENERAL]

    @pytest.mark.parametrize("overrides", [{"initial": ("cube",)}, {"initial": ()}, {"overlap": -1.0}])
    def test_validation(self, overrides):
        with pytest.raises(ConfigError):
            SweepOptions(**overrides)


class TestSweep:
    def test_rows_follow_the_mode_schedule(self):
        stub = StubDescent()
        records, tracker = run_sweep([40.0, 45.0, 60.0], stub, l_max=4, l_max_axisym=8)
        assert [(r.b_field, r.mode) for r in records] == [
            (40.0, SolverMode.GENERAL),
            (45.0, SolverMode.GENERAL),
            (45.0, SolverMode.AXISYM),
            (60.0, SolverMode.AXISYM),
        ]
        assert all(r.ok for r in records)
        assert tracker.get_progress_data()["phase_counts"]["complete"] == 3

    def test_warm_start_from_previous_row(self):
        stub = StubDescent()
        records, _ = run_sweep([40.0, 45.0, 60.0], stub, l_max=4, l_max_axisym=8)
        assert records[0].initial == "ball"
        assert records[1].initial == "warm"
        assert records[2].initial == "warm"
        axisym_start = stub.calls[2][1]
        assert axisym_start.axisymmetric and axisym_start.l_max == 8
        assert volume(axisym_start) == pytest.approx(1.0, rel=1e-10)

    def test_overlap_comparison(self, caplog):
        stub = StubDescent()
        records, _ = run_sweep([45.0], stub, l_max=4, l_max_axisym=8)
        general, axisym = records
        assert general.overlap_rel_diff == pytest.approx(0.5 / 55.0)
        assert axisym.overlap_rel_diff == general.overlap_rel_diff
        assert "Modes disagree" in caplog.text

    def test_best_of_several_starts(self):
        stub = StubDescent()
        records, _ = run_sweep([10.0], stub, l_max=4, initial=("ball", "prolate", "random"))
        assert len(stub.calls) == 3
        assert records[0].initial == "ball"

    def test_failed_rows_do_not_stop_the_sweep(self):
        stub = StubDescent(fail_at={20.0})
        records, tracker = run_sweep([10.0, 20.0, 30.0], stub, l_max=4)
        assert [r.ok for r in records] == [True, False, True]
        assert records[1].error["error_code"] == "SOLVER_ERROR"
        counts = tracker.get_progress_data()["phase_counts"]
        assert counts["failed"] == 1 and counts["complete"] == 2

    def test_record_rows(self):
        records, _ = run_sweep([10.0], StubDescent(), l_max=4)
        row = records[0].to_row()
        assert set(row) == set(SWEEP_COLUMNS)
        assert row["mode"] == "general"
        assert row["iterations"] == 0
        assert row["h"] == FIXED_DESCRIPTORS.h
        assert row["error_code"] is None

    @pytest.mark.parametrize("grid", [[], [30.0, 20.0], [-1.0, 2.0]])
    def test_invalid_grid(self, grid):
        with pytest.raises(ConfigError):
            sweep(grid)
