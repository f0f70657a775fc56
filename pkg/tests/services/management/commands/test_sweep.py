"""Tests for the sweep management command on a five-point grid."""

import importlib
import json
from io import StringIO
from unittest.mock import patch

import numpy as np
import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from data.repositories import FileArtifactRepository
from services.core.constants import StopReason
from services.core.exceptions import SolverError
from services.shapeopt.descent import DescentIterate, DescentTrajectory


class StubDescent:
    """Returns the start shape with J = B + 10."""

    def __init__(self, fail_at=()):
        self.fail_at = set(fail_at)
        self.fields = []

    def __call__(self, start, b_field, options):
        self.fields.append(b_field)
        if b_field in self.fail_at:
            raise SolverError("no eigenvalue", details={"B": b_field})
        trajectory = DescentTrajectory(b_field, start.l_max, start.axisymmetric)
        trajectory.iterates.append(DescentIterate(0, np.array(start.coeffs), b_field + 10.0, 0.0, 0.0))
        trajectory.stop_reason = StopReason.MAX_ITER
        return trajectory


def run_sweep(tmp_path, stub, **options):
    stdout = StringIO()
    # services.shapeopt re-exports the sweep() function, which shadows the
    # submodule for dotted-path patch targets; patch the module object itself
    sweep_module = importlib.import_module("services.shapeopt.sweep")
    with patch.object(sweep_module, "gradient_descent", side_effect=stub):
        call_command(
            "sweep", grid="20:60:10", axisym_from=50.0, overlap=0.0, l_max=4,
            out=str(tmp_path), stdout=stdout, stderr=StringIO(), **options,
        )
    return json.loads(stdout.getvalue())


class TestSweepCommand:
    """Test cases for the sweep command."""

    def test_runs_end_to_end(self, tmp_path):
        """Every grid point yields a row, minimizer artifacts and a progress record."""
        stub = StubDescent()
        summary = run_sweep(tmp_path, stub)

        assert summary["rows"] == 5
        assert summary["failed"] == 0
        assert stub.fields == [20.0, 30.0, 40.0, 50.0, 60.0]

        repository = FileArtifactRepository(str(tmp_path))
        provenance, rows = repository.read_csv("sweep.csv")
        assert "config_hash" in provenance
        assert [row["mode"] for row in rows] == ["general"] * 3 + ["axisym"] * 2
        assert [float(row["J"]) for row in rows] == [30.0, 40.0, 50.0, 60.0, 70.0]
        assert all(float(row["h"]) > 0 for row in rows)
        assert repository.exists("sweep/B20_general_mesh.obj")
        assert repository.exists("sweep/B60_axisym_shape.json")
        assert repository.exists("sweep_progress.json")
        assert repository.exists("sweep_manifest.json")

    def test_failed_rows_give_a_partial_sweep(self, tmp_path):
        """A failed row is recorded, the others are kept, and the exit code is 4."""
        with pytest.raises(CommandError) as excinfo:
            run_sweep(tmp_path, StubDescent(fail_at={40.0}))

        assert excinfo.value.returncode == 4
        _, rows = FileArtifactRepository(str(tmp_path)).read_csv("sweep.csv")
        assert len(rows) == 5
        failed = [row for row in rows if row["error_code"]]
        assert [float(row["B"]) for row in failed] == [40.0]

    def test_rerun_is_byte_identical(self, tmp_path):
        """The same configuration and seed reproduce sweep.csv exactly."""
        run_sweep(tmp_path, StubDescent(), seed=3)
        first = (tmp_path / "sweep.csv").read_bytes()
        run_sweep(tmp_path, StubDescent(), seed=3)
        assert (tmp_path / "sweep.csv").read_bytes() == first

    def test_malformed_grid(self, tmp_path):
        with pytest.raises(CommandError) as excinfo:
            call_command("sweep", grid="20:x", out=str(tmp_path), stdout=StringIO(), stderr=StringIO())
        assert excinfo.value.returncode == 2
