"""Shared plumbing of the magshape management commands."""

import json
import logging
from typing import Any, Dict, List, Optional, Type

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from data.repositories import FileArtifactRepository
from services.core.exceptions import ErrorClassifier, MagShapeError, PartialSweepError
from services.management.run_config import RunConfig

logger = logging.getLogger(__name__)


class MagShapeCommand(BaseCommand):
    """Base class: resolves the run configuration, runs, and reports errors.

    Subclasses set ``config_class`` and implement ``add_command_arguments``
    and ``run``. Every failure is printed to stderr as an error JSON and
    turned into a ``CommandError`` carrying the documented exit code.
    """

    config_class: Type[RunConfig] = RunConfig

    def add_arguments(self, parser):
        parser.add_argument("--out", help="Output directory (default: MAGSHAPE_OUTPUT_DIR)")
        parser.add_argument("--seed", type=int, help="Seed for sampled points and random shapes")
        parser.add_argument("--threads", type=int, help="Parallelism cap (default: MAGSHAPE_THREADS)")
        parser.add_argument("--config", help="JSON file whose keys override the flags")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser) -> None:
        pass

    def handle(self, *args, **options):
        """Handle the command execution."""
        try:
            config = self.config_class.build(options, options.get("config"))
            self.repository = FileArtifactRepository(config.out, settings.MAGSHAPE_CODE_VERSION)
            self.artifacts: List[str] = []
            self.failures: List[Dict[str, Any]] = []
            logger.info(
                "Running %s with config hash %s", config.command, config.config_hash()
            )
            summary = self.run(config)
            self._write_manifest(config)
            self.raise_for_failures()
        except CommandError:
            raise
        except Exception as exc:
            error = ErrorClassifier.classify(exc)
            self._report(error)
            raise CommandError(error.message, returncode=error.exit_code.value) from exc
        if summary:
            self.stdout.write(json.dumps(summary, sort_keys=True))

    def run(self, config: Any) -> Optional[Dict[str, Any]]:
        raise NotImplementedError

    def record_artifact(self, path: str) -> str:
        self.artifacts.append(path)
        return path

    def record_failure(self, error: MagShapeError) -> Dict[str, Any]:
        payload = error.to_payload()
        self.failures.append(payload)
        return payload

    def raise_for_failures(self) -> None:
        if self.failures:
            raise PartialSweepError(
                f"{len(self.failures)} row(s) failed",
                details={"failures": self.failures},
            )

    def _write_manifest(self, config: RunConfig) -> None:
        self.repository.save_json(
            f"{config.command}_manifest.json",
            {
                "command": config.command,
                "config": config.to_dict(),
                "config_hash": config.config_hash(),
                "version": settings.MAGSHAPE_CODE_VERSION,
                "artifacts": self.artifacts,
                "failures": self.failures,
            },
        )

    def _report(self, error: MagShapeError) -> None:
        if error.exit_code.value >= 3:
            logger.error("%s: %s", error.error_code, error.message)
        self.stderr.write(error.to_json(), style_func=lambda text: text)
