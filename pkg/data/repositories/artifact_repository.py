import csv
import io
import json
import logging
import os
import tempfile
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from services.core.constants import CODE_VERSION
from services.core.exceptions import ConfigError
from services.core.interfaces import IArtifactRepository

logger = logging.getLogger(__name__)

PROVENANCE_PREFIX = "# "


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def _default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


class FileArtifactRepository(IArtifactRepository):
    """File-system implementation of the artifact repository.

    Every write goes to a temporary file in the target directory and is
    moved into place with ``os.replace``, so readers never see partial files.
    """

    def __init__(self, root: str, code_version: str = CODE_VERSION):
        self.root = os.path.abspath(root)
        self.code_version = code_version
        os.makedirs(self.root, exist_ok=True)

    def path_for(self, name: str) -> str:
        """Absolute path of a named artifact."""
        path = os.path.abspath(os.path.join(self.root, name))
        if os.path.commonpath([path, self.root]) != self.root:
            raise ConfigError(f"artifact name escapes the output directory: {name}")
        return path

    def exists(self, name: str) -> bool:
        return os.path.exists(self.path_for(name))

    def _write_atomic(self, name: str, text: str) -> str:
        path = self.path_for(name)
        directory = os.path.dirname(path)
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        logger.debug("Wrote %s", path)
        return path

    def save_json(self, name: str, payload: Dict[str, Any]) -> str:
        """Persist a JSON document and return its path."""
        text = json.dumps(payload, indent=2, sort_keys=True, default=_default)
        return self._write_atomic(name, text + "\n")

    def load_json(self, name: str) -> Dict[str, Any]:
        """Load a JSON document.

        Raises:
            ConfigError: If the file is missing or not valid JSON
        """
        return load_json_file(self.path_for(name))

    def write_csv(
        self,
        name: str,
        columns: List[str],
        rows: List[Dict[str, Any]],
        config_hash: str,
    ) -> str:
        """Write a CSV table preceded by a provenance comment line."""
        buffer = io.StringIO()
        buffer.write(f"{PROVENANCE_PREFIX}config_hash={config_hash} version={self.code_version}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            unknown = set(row) - set(columns)
            if unknown:
                raise ConfigError("CSV row has unknown columns", details={"columns": sorted(unknown)})
            writer.writerow([_format_cell(row.get(column)) for column in columns])
        return self._write_atomic(name, buffer.getvalue())

    def read_csv(self, name: str) -> Tuple[Dict[str, str], List[Dict[str, str]]]:
        """Read a CSV table, returning (provenance, rows)."""
        path = self.path_for(name)
        try:
            with open(path, encoding="utf-8", newline="") as handle:
                lines = handle.read().splitlines()
        except FileNotFoundError as exc:
            raise ConfigError(f"Input file not found: {path}", details={"path": path}) from exc

        provenance: Dict[str, str] = {}
        body = []
        for line in lines:
            if line.startswith(PROVENANCE_PREFIX):
                provenance.update(_parse_provenance(line[len(PROVENANCE_PREFIX):]))
            elif line:
                body.append(line)
        return provenance, list(csv.DictReader(body))

    def write_obj(self, name: str, vertices: np.ndarray, faces: np.ndarray) -> str:
        """Write an ASCII OBJ mesh; faces are 0-based on input."""
        lines = [f"# version={self.code_version}"]
        lines.extend(f"v {x:.12g} {y:.12g} {z:.12g}" for x, y, z in np.asarray(vertices, dtype=float))
        lines.extend(f"f {a + 1} {b + 1} {c + 1}" for a, b, c in np.asarray(faces, dtype=int))
        return self._write_atomic(name, "\n".join(lines) + "\n")


def _parse_provenance(text: str) -> Dict[str, str]:
    fields = {}
    for token in text.split():
        key, sep, value = token.partition("=")
        if sep:
            fields[key] = value
    return fields


def read_float(row: Dict[str, str], column: str) -> Optional[float]:
    """Parse a CSV cell written by ``write_csv``; empty cells are None."""
    value = row.get(column, "")
    return float(value) if value not in ("", None) else None


def load_json_file(path: str) -> Any:
    """Read a JSON input file given by the user.

    Raises:
        ConfigError: If the file is missing or not valid JSON
    """
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as exc:
        raise ConfigError(f"Input file not found: {path}", details={"path": path}) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Invalid JSON in {path}: {exc.msg}", details={"path": path}) from exc
