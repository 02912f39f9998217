"""
File utility functions for thyroidiomics

All outputs are written atomically: data goes to a temporary file in the
target directory which is then renamed over the destination.
"""

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict, Optional

from .. import __version__
from ..errors import MissingFileError, SchemaError

TOOL_NAME = "thyroidiomics"


def ensure_directory(path: Path) -> None:
    """
    Ensure directory exists, create if it doesn't

    Args:
        path: Directory path to ensure exists
    """
    path.mkdir(parents=True, exist_ok=True)


def dumps_json(data: Any) -> str:
    """Serialize ``data`` the same way on every platform (2-space indent, trailing newline)"""
    return json.dumps(data, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def atomic_write(file_path: Path, writer: Callable[[Path], None]) -> None:
    """
    Run ``writer`` against a temporary path, then move it onto ``file_path``

    Args:
        file_path: Final destination
        writer: Callable that writes the complete content to the path it receives
    """
    file_path = Path(file_path)
    ensure_directory(file_path.parent)
    fd, tmp_name = tempfile.mkstemp(
        prefix=f".{file_path.name}.", suffix=".tmp", dir=str(file_path.parent)
    )
    os.close(fd)
    tmp_path = Path(tmp_name)
    try:
        writer(tmp_path)
        os.replace(tmp_path, file_path)
    except BaseException:
        tmp_path.unlink(missing_ok=True)
        raise


def write_bytes_atomic(file_path: Path, payload: bytes) -> None:
    atomic_write(file_path, lambda tmp: tmp.write_bytes(payload))


def write_text_atomic(file_path: Path, text: str) -> None:
    atomic_write(file_path, lambda tmp: tmp.write_text(text, encoding="utf-8"))


def read_json_file(file_path: Path) -> Any:
    """
    Read and parse JSON file

    Args:
        file_path: Path to JSON file

    Returns:
        Parsed JSON data

    Raises:
        MissingFileError: If the file doesn't exist
        SchemaError: If the content is not valid JSON
    """
    file_path = Path(file_path)
    if not file_path.exists():
        raise MissingFileError(str(file_path))

    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON in {file_path}: {e}") from e


def write_json_file(file_path: Path, data: Any) -> None:
    """
    Write data to JSON file atomically

    Args:
        file_path: Path to write JSON file
        data: Data to write
    """
    write_text_atomic(Path(file_path), dumps_json(data))


def provenance_path(output: Path) -> Path:
    """Where the provenance record for ``output`` lives"""
    output = Path(output)
    if output.is_dir() or not output.suffix:
        return output / "run.json"
    return output.with_name(output.name + ".run.json")


def write_provenance(
    output: Path,
    command: str,
    params: Dict[str, Any],
    extra: Optional[Dict[str, Any]] = None,
) -> Path:
    """
    Write the provenance record accompanying an output

    Args:
        output: Output directory or file
        command: Subcommand name
        params: Fully resolved parameters (seed included)
        extra: Additional facts about the run (e.g. failed cases)

    Returns:
        Path of the written record
    """
    record: Dict[str, Any] = {
        "tool": TOOL_NAME,
        "version": __version__,
        "command": command,
        "config": {k: _jsonable(v) for k, v in sorted(params.items())},
    }
    if extra:
        record.update({k: _jsonable(v) for k, v in extra.items()})

    path = provenance_path(output)
    write_json_file(path, record)
    return path


def _jsonable(value: Any) -> Any:
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value
