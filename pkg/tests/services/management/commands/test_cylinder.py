"""Tests for the cylinder management command."""

import json
from io import StringIO
from unittest.mock import patch

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from data.repositories import FileArtifactRepository, read_float
from services.core.exceptions import SolverError
from services.cylinder import optimal_cylinder


def run_cylinder(tmp_path, **options):
    stdout, stderr = StringIO(), StringIO()
    call_command("cylinder", out=str(tmp_path), stdout=stdout, stderr=stderr, **options)
    return stdout.getvalue(), stderr.getvalue()


@pytest.mark.integration
class TestCylinderCommand:
    """End-to-end runs on tiny grids."""

    def test_writes_table_and_manifest(self, tmp_path):
        """One row per grid value, with the asymptotics left blank for B <= 1."""
        stdout, _ = run_cylinder(tmp_path, grid="0:1:1")

        assert json.loads(stdout) == {"rows": 2, "failed": 0}
        repository = FileArtifactRepository(str(tmp_path))
        provenance, rows = repository.read_csv("cylinder.csv")
        assert set(provenance) == {"config_hash", "version"}
        assert [read_float(row, "B") for row in rows] == [0.0, 1.0]
        assert read_float(rows[0], "h_asym") is None
        assert read_float(rows[0], "lambda_star") == pytest.approx(optimal_cylinder(0.0).lambda_star)

        manifest = repository.load_json("cylinder_manifest.json")
        assert manifest["config_hash"] == provenance["config_hash"]
        assert manifest["failures"] == []
        assert manifest["artifacts"] == [repository.path_for("cylinder.csv")]

    def test_failed_row_exits_with_partial_code(self, tmp_path):
        """A failing row is recorded and the command exits with code 4."""
        real = optimal_cylinder

        def flaky(B):
            if B > 0:
                raise SolverError("no bracket")
            return real(B)

        stderr = StringIO()
        with patch("services.management.commands.cylinder.optimal_cylinder", side_effect=flaky):
            with pytest.raises(CommandError) as excinfo:
                call_command("cylinder", out=str(tmp_path), grid="0:1:1", stderr=stderr)

        assert excinfo.value.returncode == 4
        assert json.loads(stderr.getvalue())["error_code"] == "PARTIAL_SWEEP_ERROR"
        _, rows = FileArtifactRepository(str(tmp_path)).read_csv("cylinder.csv")
        assert rows[1]["error_code"] == "SOLVER_ERROR"

    def test_bad_grid_is_config_error(self, tmp_path):
        """Malformed grids exit with code 2 before any work."""
        with pytest.raises(CommandError) as excinfo:
            run_cylinder(tmp_path, grid="5:1:1")
        assert excinfo.value.returncode == 2
