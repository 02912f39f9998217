"""
Extract command for thyroidiomics CLI

Computes the 93 radiomics features of every case in a manifest.
"""

from pathlib import Path

import click

from ..experiment.extraction import extract_manifest
from ..experiment.manifest import MASK_SOURCES, load_manifest
from ..imaging.resample import Interpolator
from ..radiomics.base import ExtractionConfig
from ..utils.console import print_header, print_info, print_step, print_success, print_warning
from ..utils.file_utils import write_provenance
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
@click.option("--bin-width", type=float, default=0.3, show_default=True, help="Fixed gray-level bin width")
@click.option(
    "--interpolator",
    type=click.Choice([m.value for m in Interpolator]),
    default="cubic",
    show_default=True,
    help="Image interpolator for resampling to 1 mm",
)
@click.option("--gldm-alpha", type=float, default=0.0, show_default=True, help="GLDM dependence tolerance")
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True, help="Output CSV")
@click.pass_context
def extract_command(
    ctx: click.Context,
    manifest: Path,
    mask_source: str,
    bin_width: float,
    interpolator: str,
    gldm_alpha: float,
    out: Path,
) -> None:
    """
    Extract radiomics features into a CSV table.

    Columns are case_id, center_id, label, then the 93 features in canonical
    order. Cases whose ROI is unusable are skipped and listed in the
    provenance record.

    Examples:
        thyroidiomics extract -m data/manifest.json --out features.csv
        thyroidiomics extract -m data/manifest.json --mask-source predicted --out pred.csv
    """
    print_header("Feature Extraction")

    cfg = ExtractionConfig(bin_width=bin_width, interpolator=interpolator, gldm_alpha=gldm_alpha)
    dataset = load_manifest(manifest)
    if mask_source == "predicted":
        dataset.check_files(require_predicted=True)

    print_step(f"Extracting {len(dataset)} cases ({mask_source} masks)...")
    table, failures = extract_manifest(dataset, mask_source, cfg, workers=get_workers(ctx))
    table.to_csv(out)

    params = {"manifest": manifest, "mask_source": mask_source, **cfg.to_dict()}
    write_provenance(
        out,
        "extract",
        params,
        {"failures": [{"case_id": f.case_id, "reason": f.reason} for f in failures]},
    )

    if failures:
        print_warning(f"{len(failures)} cases could not be extracted (see {out.name}.run.json)")
    print_success(f"Wrote {table.n_rows} x {len(table.columns)} features")
    print_info(f"📁 Features: {out}")
