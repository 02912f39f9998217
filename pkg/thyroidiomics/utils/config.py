"""
Configuration utilities for thyroidiomics

Run configurations are JSON or YAML mappings keyed by subcommand name, e.g.::

    {"lococv": {"seed": 7, "k": 10}, "extract": {"bin_width": 0.3}}

They feed click's ``default_map`` so an explicit flag always wins over the
file, and the file wins over built-in defaults.
"""

import json
from pathlib import Path
from typing import Any, Dict, FrozenSet, Optional

import yaml

from ..errors import MissingFileError, SchemaError

PRESETS_DIR = Path(__file__).resolve().parent.parent / "presets"
EXTENDS_KEY = "extends"


def list_presets() -> Dict[str, Path]:
    """Map preset names to the predefined config files shipped with the package"""
    if not PRESETS_DIR.exists():
        return {}
    return {p.stem: p for p in sorted(PRESETS_DIR.glob("*.json"))}


def resolve_config_path(name_or_path: str) -> Path:
    """
    Resolve a ``--config`` argument

    Args:
        name_or_path: A file path, or the bare name of a predefined preset

    Returns:
        Path to an existing configuration file

    Raises:
        MissingFileError: If neither a file nor a preset matches
    """
    candidate = Path(name_or_path)
    if candidate.exists():
        return candidate

    presets = list_presets()
    if name_or_path in presets:
        return presets[name_or_path]

    available = ", ".join(presets) or "none"
    raise MissingFileError(
        f"configuration '{name_or_path}' not found (presets: {available})"
    )


def load_config(config_path: str, _seen: Optional[FrozenSet[Path]] = None) -> Dict[str, Any]:
    """
    Load a run configuration from a JSON or YAML file

    A top-level ``extends`` key names a base configuration (file or preset)
    which the rest of the file is deep-merged over.

    Args:
        config_path: Path to the config file, or a preset name

    Returns:
        Configuration dictionary

    Raises:
        MissingFileError: If the file doesn't exist
        SchemaError: If the file is not a valid JSON/YAML mapping, or the
            ``extends`` chain loops
    """
    config_file = resolve_config_path(config_path)
    seen = (_seen or frozenset()) | {config_file.resolve()}

    try:
        with open(config_file, "r", encoding="utf-8") as f:
            if config_file.suffix.lower() in (".yaml", ".yml"):
                config = yaml.safe_load(f)
            else:
                config = json.load(f)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise SchemaError(f"invalid configuration file {config_file}: {e}") from e

    if config is None:
        return {}
    if not isinstance(config, dict):
        raise SchemaError(f"configuration file {config_file} must hold a mapping")

    base = config.pop(EXTENDS_KEY, None)
    if base is None:
        return config
    if not isinstance(base, str):
        raise SchemaError(f"{config_file}: '{EXTENDS_KEY}' must name a configuration")
    if resolve_config_path(base).resolve() in seen:
        raise SchemaError(f"{config_file}: '{EXTENDS_KEY}' chain loops back to '{base}'")
    return merge_config(load_config(base, seen), config)


def to_default_map(config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Convert a run configuration into a click ``default_map``

    Option names may be written with dashes or underscores; click expects
    the parameter (underscore) form.
    """
    default_map: Dict[str, Any] = {}
    for command, options in config.items():
        if isinstance(options, dict):
            default_map[command] = {
                key.replace("-", "_"): value for key, value in options.items()
            }
        else:
            default_map[command.replace("-", "_")] = options
    return default_map


def get_config_value(config: Dict[str, Any], key: str, default: Any = None) -> Any:
    """
    Get a specific value from configuration

    Args:
        config: Configuration dictionary
        key: Configuration key (supports dot notation like 'lococv.seed')
        default: Default value if key not found

    Returns:
        Configuration value or default
    """
    value: Any = config
    for k in key.split("."):
        if isinstance(value, dict) and k in value:
            value = value[k]
        else:
            return default
    return value


def merge_config(base: Dict[str, Any], updates: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    """Deep merge ``updates`` into a copy of ``base``"""
    return _deep_merge(base, updates or {})


def _deep_merge(base: Dict[str, Any], updates: Dict[str, Any]) -> Dict[str, Any]:
    """
    Deep merge two dictionaries

    Args:
        base: Base dictionary
        updates: Updates to merge into base

    Returns:
        Merged dictionary
    """
    result = base.copy()

    for key, value in updates.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = _deep_merge(result[key], value)
        else:
            result[key] = value

    return result
