"""
DSC command for thyroidiomics CLI

Dice similarity of a mask pair, or of every predicted mask in a manifest.
"""

from pathlib import Path
from typing import Optional

import click

from ..errors import InvalidArgumentError, SchemaError
from ..experiment.manifest import load_manifest
from ..experiment.reports import dsc_report
from ..imaging.grid import BinaryMask
from ..imaging.scin_io import read_scin
from ..segmentation.evaluation import dsc
from ..utils.console import print_header, print_info, print_success, print_table
from ..utils.file_utils import write_json_file, write_provenance
from .common import get_workers, manifest_option


def read_mask(path: Path) -> BinaryMask:
    grid = read_scin(path)
    if not isinstance(grid, BinaryMask):
        raise SchemaError(f"{path}: expected a u8 mask")
    return grid


@click.command()
@click.option("--pred", type=click.Path(dir_okay=False, path_type=Path), help="Predicted mask (SCIN header)")
@click.option("--gt", type=click.Path(dir_okay=False, path_type=Path), help="Ground-truth mask (SCIN header)")
@manifest_option(required=False)
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), help="Output JSON")
@click.pass_context
def dsc_command(
    ctx: click.Context,
    pred: Optional[Path],
    gt: Optional[Path],
    manifest: Optional[Path],
    out: Optional[Path],
) -> None:
    """
    Dice similarity coefficient between masks.

    Either compare one pair (--pred/--gt, prints the value) or every
    predicted mask of a manifest against its physician mask (--manifest,
    with per-label and per-center means).

    Examples:
        thyroidiomics dsc --pred case_pred.json --gt case_mask.json
        thyroidiomics dsc -m data/manifest.json --out dsc.json
    """
    pair = pred is not None or gt is not None
    if pair == (manifest is not None):
        raise InvalidArgumentError("give either --pred and --gt, or --manifest")

    if pair:
        if pred is None or gt is None:
            raise InvalidArgumentError("--pred and --gt go together")
        value = dsc(read_mask(pred), read_mask(gt))
        click.echo(f"{value:.6f}")
        if out is not None:
            write_json_file(out, {"pred": str(pred), "gt": str(gt), "dsc": value})
        return

    print_header("Segmentation Overlap")
    report = dsc_report(load_manifest(manifest), workers=get_workers(ctx))
    per_label = report.per_label()
    over_centers = report.per_label_over_centers()
    print_table(
        "DSC per label",
        ["label", "mean", "mean over centers"],
        [[label, per_label[label], over_centers[label]] for label in per_label],
    )
    print_info(f"Mean DSC: {report.mean:.4f}")
    if out is not None:
        write_json_file(out, report.to_dict())
        write_provenance(out, "dsc", {"manifest": manifest})
        print_info(f"📁 Report: {out}")
    print_success(f"Compared {len(report.cases)} cases")
