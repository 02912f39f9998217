"""
Options and helpers shared by the subcommands
"""

from pathlib import Path
from typing import Any, Callable, Optional, Tuple

import click

from ..utils.file_utils import read_json_file
from ..utils.parallel import default_workers

SEED_ENVVAR = "THYROIDIOMICS_SEED"


def seed_option(func: Callable[..., Any]) -> Callable[..., Any]:
    """``--seed`` falling back to THYROIDIOMICS_SEED, then 0"""
    return click.option(
        "--seed",
        type=int,
        envvar=SEED_ENVVAR,
        default=0,
        show_default=True,
        help=f"Global seed (env: {SEED_ENVVAR})",
    )(func)


def manifest_option(required: bool = True) -> Callable[..., Any]:
    return click.option(
        "--manifest",
        "-m",
        type=click.Path(dir_okay=False, path_type=Path),
        required=required,
        help="Dataset manifest JSON",
    )


def get_workers(ctx: click.Context) -> int:
    """The group-level ``--workers`` value"""
    obj = ctx.find_root().obj or {}
    workers = obj.get("workers")
    return int(workers) if workers else default_workers()


def parse_int_list(value: str, expected: int, name: str) -> Tuple[int, ...]:
    """Parse ``"20,20,20"`` style options"""
    try:
        parts = tuple(int(p) for p in str(value).split(","))
    except ValueError:
        raise click.BadParameter(f"{name} must be {expected} comma-separated integers, got {value!r}")
    if len(parts) != expected:
        raise click.BadParameter(f"{name} must be {expected} comma-separated integers, got {value!r}")
    return parts


def parse_lattice(value: str) -> Any:
    """A preset name, or a JSON file holding lattice axes"""
    path = Path(value)
    if path.suffix.lower() == ".json" and path.exists():
        return read_json_file(path)
    return value


def format_optional(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.4f}"
