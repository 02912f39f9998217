"""
Phantom command for thyroidiomics CLI

Generates the synthetic multi-center scintigraphy dataset.
"""

from pathlib import Path
from typing import Optional

import click

from ..evaluation.metrics import CATEGORIES
from ..experiment.phantom import MANIFEST_NAME, PhantomSpec, generate_dataset
from ..utils.console import print_header, print_info, print_step, print_success, print_table
from ..utils.file_utils import write_provenance
from .common import get_workers, parse_int_list, seed_option


@click.command()
@click.option("--centers", "-c", type=int, default=9, show_default=True, help="Number of centers")
@click.option(
    "--per-center",
    default="20,20,20",
    show_default=True,
    help="Cases per center for MNG,TH,DG",
)
@click.option("--size", type=int, default=128, show_default=True, help="Image side in pixels")
@click.option(
    "--large-center",
    type=int,
    default=5,
    show_default=True,
    help="Center acquired at 2x size and 0.5 mm spacing (0 for none)",
)
@click.option(
    "--perturb-mm",
    type=float,
    default=2.0,
    show_default=True,
    help="Boundary ring width of the predicted masks",
)
@seed_option
@click.option("--out", "-o", type=click.Path(file_okay=False, path_type=Path), required=True, help="Output directory")
@click.pass_context
def phantom_command(
    ctx: click.Context,
    centers: int,
    per_center: str,
    size: int,
    large_center: Optional[int],
    perturb_mm: float,
    seed: int,
    out: Path,
) -> None:
    """
    Generate a synthetic multi-center phantom dataset.

    Writes SCIN images, physician masks and predicted masks per center plus
    a manifest.json describing every case.

    Examples:
        thyroidiomics phantom --out data/
        thyroidiomics phantom --centers 9 --per-center 20,20,20 --seed 7 --out data/
    """
    print_header("Phantom Generation")

    spec = PhantomSpec(
        centers=centers,
        per_center=parse_int_list(per_center, len(CATEGORIES), "--per-center"),
        size=size,
        large_center=large_center or None,
        perturb_mm=perturb_mm,
        seed=seed,
    )

    print_step(f"Writing {spec.centers} centers to {out}...")
    manifest = generate_dataset(spec, out, workers=get_workers(ctx))
    write_provenance(out, "phantom", spec.to_dict())

    rows = []
    for center in manifest.centers:
        cases = manifest.by_center(center)
        rows.append([center] + [sum(1 for c in cases if c.label == label) for label in CATEGORIES])
    print_table("Cases per center", ["center"] + list(CATEGORIES), rows)

    print_success(f"Generated {len(manifest)} cases")
    print_info(f"📁 Manifest: {out / MANIFEST_NAME}")
