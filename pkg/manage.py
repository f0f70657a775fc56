#!/usr/bin/env python
"""Command-line entry point: dev helpers plus the magshape management commands."""

import os
import sys

from commands import handle_format, handle_lint, handle_test, handle_test_coverage

DEV_COMMANDS = {
    "lint": handle_lint,
    "format": handle_format,
    "test": handle_test,
    "test:coverage": handle_test_coverage,
}


def main():
    """Run administrative tasks."""
    from dotenv import load_dotenv

    load_dotenv()

    if len(sys.argv) >= 2 and sys.argv[1] in DEV_COMMANDS:
        DEV_COMMANDS[sys.argv[1]]()
        return

    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "MagShape.settings")
    os.environ.setdefault("DJANGO_CONFIGURATION", "Production")
    try:
        from configurations.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
