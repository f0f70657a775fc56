"""Developer command handlers for manage.py."""

import subprocess
import sys


def run_command(cmd):
    """Run a shell command and return its exit code."""
    print(f"Running: {cmd}")
    result = subprocess.run(cmd, shell=True)
    return result.returncode


def handle_lint():
    """ruff, then mypy, over the given paths or the whole tree."""
    targets = " ".join(f'"{p}"' for p in sys.argv[2:]) or "."
    exit_code = run_command(f"ruff check {targets}")
    if exit_code == 0:
        exit_code = run_command(f"mypy {targets}")
    sys.exit(exit_code)


def handle_format():
    sys.exit(run_command("ruff format ."))


def handle_test():
    """Run pytest; ``--fast`` deselects tests marked slow."""
    args = []
    for arg in sys.argv[2:]:
        if arg == "--fast":
            args.extend(["-m", '"not slow"'])
        else:
            args.append(arg)
    sys.exit(run_command(f"python -m pytest {' '.join(args)}"))


def handle_test_coverage():
    """Run the suite under pytest-cov and fail below the coverage floor."""
    extra = " ".join(sys.argv[2:])
    sys.exit(
        run_command(
            "python -m pytest --cov=services --cov=data --cov-report=term-missing "
            f"--cov-fail-under=85 {extra}"
        )
    )
