"""Tests for the report management command."""

import json
from io import StringIO
from pathlib import Path

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from data.repositories import FileArtifactRepository
from data.schemas import BALL_COLUMNS, CYLINDER_COLUMNS, SWEEP_COLUMNS
from services.management.commands.report import best_rows


@pytest.fixture
def inputs(tmp_path):
    """Minimal sweep, cylinder and ball tables at B = 10."""
    repository = FileArtifactRepository(str(tmp_path))
    repository.write_csv(
        "sweep.csv",
        SWEEP_COLUMNS,
        [
            {"B": 10.0, "mode": "general", "J": 30.0},
            {"B": 10.0, "mode": "axisym", "J": 25.0},
            {"B": 20.0, "mode": "general", "error_code": "SOLVER_ERROR"},
        ],
        "abc",
    )
    repository.write_csv(
        "cylinder.csv",
        CYLINDER_COLUMNS,
        [{"B": 10.0, "h_star": 1.0, "R_star": 0.5, "lambda_star": 28.0}],
        "def",
    )
    repository.write_csv("ball.csv", BALL_COLUMNS, [{"B": 10.0, "lambda1": 27.0}], "ghi")
    return repository


class TestBestRows:
    """Test cases for best_rows."""

    def test_keeps_lowest_J_per_field(self):
        rows = [
            {"B": "10.0", "J": "30.0", "mode": "general"},
            {"B": "10.0", "J": "25.0", "mode": "axisym"},
            {"B": "5.0", "J": "20.0", "mode": "general"},
            {"B": "7.0", "J": "", "mode": "general"},
        ]
        best = best_rows(rows)
        assert [row["B"] for row in best] == ["5.0", "10.0"]
        assert best[1]["mode"] == "axisym"


class TestReportCommand:
    """Test cases for the report command."""

    def test_merges_tables(self, inputs):
        """The best sweep row is combined with the cylinder and ball rows."""
        stdout = StringIO()
        call_command("report", out=inputs.root, stdout=stdout)

        assert json.loads(stdout.getvalue()) == {"rows": 1}
        report = inputs.load_json("report.json")
        assert report["inputs"]["sweep"]["config_hash"] == "abc"
        (row,) = report["rows"]
        assert row["lambda_star"] == 25.0
        assert row["lambda_cyl_star"] == 28.0
        assert row["lambda_ball"] == 27.0
        assert row["quotient"] == pytest.approx(15.0 / 18.0)
        assert inputs.exists("report.csv")

    def test_rerun_is_byte_identical(self, inputs):
        """Running the report twice over the same inputs reproduces report.csv exactly."""
        call_command("report", out=inputs.root, stdout=StringIO())
        first = Path(inputs.path_for("report.csv")).read_bytes()
        call_command("report", out=inputs.root, stdout=StringIO())
        assert Path(inputs.path_for("report.csv")).read_bytes() == first

    def test_missing_inputs(self, tmp_path):
        """Absent tables are a configuration error naming every missing file."""
        stderr = StringIO()
        with pytest.raises(CommandError) as excinfo:
            call_command("report", out=str(tmp_path), stderr=stderr)

        assert excinfo.value.returncode == 2
        payload = json.loads(stderr.getvalue())
        assert payload["error_code"] == "CONFIG_ERROR"
        assert payload["details"]["missing"] == ["sweep.csv", "cylinder.csv", "ball.csv"]
