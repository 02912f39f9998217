"""
ROI counts command for thyroidiomics CLI
"""

import io
from pathlib import Path

import click
import pandas as pd

from ..experiment.manifest import MASK_SOURCES, load_manifest
from ..experiment.reports import roi_count_table
from ..utils.console import print_header, print_info, print_success, print_table
from ..utils.file_utils import write_provenance, write_text_atomic
from .common import get_workers, manifest_option


@click.command()
@manifest_option()
@click.option(
    "--mask-source",
    type=click.Choice(MASK_SOURCES),
    default="physician",
    show_default=True,
    help="Which mask delimits the ROI",
)
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True, help="Output CSV")
@click.pass_context
def roi_counts_command(ctx: click.Context, manifest: Path, mask_source: str, out: Path) -> None:
    """
    Total counts inside each case's ROI.

    Writes a CSV with case_id, center_id, pathology and counts, and prints
    the count distribution per pathology.

    Examples:
        thyroidiomics roi-counts -m data/manifest.json --out counts.csv
    """
    print_header("ROI Counts")

    entries = roi_count_table(load_manifest(manifest), mask_source, workers=get_workers(ctx))
    frame = pd.DataFrame(
        {
            "case_id": [e.case_id for e in entries],
            "center_id": [e.center_id for e in entries],
            "pathology": [e.label for e in entries],
            "counts": [e.counts for e in entries],
        }
    )
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format="%.17g", lineterminator="\n")
    write_text_atomic(out, buffer.getvalue())
    write_provenance(out, "roi-counts", {"manifest": manifest, "mask_source": mask_source})

    stats = frame.groupby("pathology", sort=True)["counts"].agg(["count", "mean", "std", "min", "max"])
    print_table(
        "Counts per pathology",
        ["pathology", "cases", "mean", "sd", "min", "max"],
        [[name, int(row["count"])] + [float(row[c]) for c in ("mean", "std", "min", "max")] for name, row in stats.iterrows()],
    )
    print_success(f"Counted {len(entries)} ROIs")
    print_info(f"📁 Counts: {out}")
