#!/usr/bin/env python3
"""
Main CLI module for thyroidiomics

This module defines the main command group and registers all subcommands.
"""

import sys
from typing import Any, Optional

import click
from rich.text import Text

from . import __version__
from .commands.augment_preview import augment_preview_command
from .commands.dsc import dsc_command
from .commands.extract import extract_command
from .commands.lococv import lococv_command
from .commands.phantom import phantom_command
from .commands.predict import predict_command
from .commands.roi_counts import roi_counts_command
from .commands.select import select_command
from .commands.tost import tost_command
from .commands.train import train_command
from .errors import ThyroidiomicsError
from .utils.config import get_config_value, load_config, to_default_map
from .utils.console import console, print_error, print_info, print_warning
from .utils.log import setup_logging

# Context settings for better help formatting
CONTEXT_SETTINGS = {"help_option_names": ["-h", "--help"]}


class ThyroidiomicsGroup(click.Group):
    """Reports toolkit errors as ``<prefix>: <detail>`` with exit status 1"""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except ThyroidiomicsError as exc:
            raise click.ClickException(str(exc)) from exc


@click.group(cls=ThyroidiomicsGroup, context_settings=CONTEXT_SETTINGS, invoke_without_command=True)
@click.version_option(version=__version__, prog_name="thyroidiomics")
@click.option("--config", "config_path", help="Run configuration file (JSON/YAML) or preset name")
@click.option("--workers", type=click.IntRange(min=1), help="Worker processes (default: available CPUs)")
@click.option("--verbose", "-v", count=True, help="More log output (repeatable)")
@click.option("--quiet", "-q", is_flag=True, help="Warnings and errors only")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], workers: Optional[int], verbose: int, quiet: bool) -> None:
    """
    🦋 thyroidiomics - radiomics and classification for thyroid scintigraphy

    Extracts radiomics features from planar scintigraphy ROIs, selects and
    trains boosted-tree pathology classifiers, and evaluates them
    leave-one-center-out. A synthetic phantom lets the whole chain run
    without patient data.

    Examples:
        thyroidiomics phantom --seed 7 --out data/
        thyroidiomics extract -m data/manifest.json --out features.csv
        thyroidiomics lococv -m data/manifest.json --scenario 1 --out results/
        thyroidiomics --config quick lococv -m data/manifest.json --out results/
    """
    setup_logging(-1 if quiet else verbose)
    ctx.ensure_object(dict)

    if config_path:
        try:
            config = load_config(config_path)
        except ThyroidiomicsError as exc:
            raise click.ClickException(str(exc)) from exc
        ctx.default_map = to_default_map(config)
        workers = workers or get_config_value(config, "workers")

    ctx.obj["workers"] = workers

    if ctx.invoked_subcommand is None:
        welcome_text = Text()
        welcome_text.append("🦋 ", style="bold cyan")
        welcome_text.append("thyroidiomics", style="bold white")
        welcome_text.append(f" v{__version__}", style="dim white")

        console.print("\n")
        console.print(welcome_text)
        console.print("Radiomics toolkit for thyroid scintigraphy\n", style="dim")

        print_info("Usage: thyroidiomics [OPTIONS] COMMAND [ARGS]...")
        print_info("Try 'thyroidiomics --help' for more information.")
        console.print()


# Register all commands
cli.add_command(phantom_command, name="phantom")
cli.add_command(extract_command, name="extract")
cli.add_command(select_command, name="select")
cli.add_command(train_command, name="train")
cli.add_command(predict_command, name="predict")
cli.add_command(lococv_command, name="lococv")
cli.add_command(dsc_command, name="dsc")
cli.add_command(roi_counts_command, name="roi-counts")
cli.add_command(tost_command, name="tost")
cli.add_command(augment_preview_command, name="augment-preview")


def main() -> None:
    """Entry point for the CLI"""
    try:
        cli()
    except KeyboardInterrupt:
        print_warning("\nOperation cancelled by user")
        sys.exit(1)
    except Exception as e:
        print_error(f"Unexpected error: {str(e)}")
        sys.exit(1)


if __name__ == "__main__":
    main()
