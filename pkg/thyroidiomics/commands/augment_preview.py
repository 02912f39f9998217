"""
Augment-preview command for thyroidiomics CLI

Writes a few augmented training patches so the transforms can be inspected.
"""

from pathlib import Path
from typing import Optional

import click

from ..errors import SchemaError
from ..imaging.augment import AugmentConfig, draw_affine, random_affine, sample_patch
from ..imaging.grid import BinaryMask
from ..imaging.resample import Interpolator, resample
from ..imaging.scin_io import read_scin, write_scin
from ..utils.console import print_header, print_info, print_step, print_success, print_table
from ..utils.file_utils import ensure_directory, write_provenance
from .common import parse_int_list, seed_option


@click.command()
@click.option("--image", type=click.Path(dir_okay=False, path_type=Path), required=True, help="Image (SCIN header)")
@click.option("--mask", type=click.Path(dir_okay=False, path_type=Path), required=True, help="Mask (SCIN header)")
@click.option("--count", "-n", type=click.IntRange(min=1), default=8, show_default=True, help="Patches to write")
@click.option("--patch-size", type=click.IntRange(min=1), default=64, show_default=True, help="Patch side in pixels")
@click.option(
    "--fg-prob",
    type=click.FloatRange(0.0, 1.0),
    default=2.0 / 3.0,
    show_default=True,
    help="Probability that a patch is centered on the thyroid",
)
@click.option("--size", help="Resample to WIDTH,HEIGHT before augmenting (e.g. 128,128)")
@seed_option
@click.option("--out", "-o", type=click.Path(file_okay=False, path_type=Path), required=True, help="Output directory")
def augment_preview_command(
    image: Path,
    mask: Path,
    count: int,
    patch_size: int,
    fg_prob: float,
    size: Optional[str],
    seed: int,
    out: Path,
) -> None:
    """
    Write augmented patch pairs (class-balanced crop, then random affine).

    Examples:
        thyroidiomics augment-preview --image c01_MNG_000_image.json --mask c01_MNG_000_mask.json --out preview/
        thyroidiomics augment-preview --image big_image.json --mask big_mask.json --size 128,128 --count 4 --out preview/
    """
    print_header("Augmentation Preview")

    img = read_scin(image)
    roi = read_scin(mask)
    if isinstance(img, BinaryMask):
        raise SchemaError(f"{image}: expected an image")
    if not isinstance(roi, BinaryMask):
        raise SchemaError(f"{mask}: expected a u8 mask")

    if size:
        target = parse_int_list(size, 2, "--size")
        print_step(f"Resampling {img.width}x{img.height} to {target[0]}x{target[1]}...")
        img = resample(img, target_size=target, method=Interpolator.BILINEAR)
        roi = resample(roi, target_size=target, method=Interpolator.NEAREST)

    cfg = AugmentConfig(patch_size=patch_size, fg_center_prob=fg_prob, seed=seed)
    case_id = image.name.replace(".json", "")
    ensure_directory(out)

    rows = []
    for index in range(count):
        patch_img, patch_mask = sample_patch(img, roi, cfg, index, case_id)
        warped_img, warped_mask = random_affine(patch_img, patch_mask, cfg, index, case_id)
        write_scin(warped_img, out / f"patch_{index:03d}_image.json", dtype="f32")
        write_scin(warped_mask, out / f"patch_{index:03d}_mask.json")
        tx, ty, theta, scale = draw_affine(cfg, index, case_id)
        rows.append([index, warped_mask.count, f"{tx:+.2f}", f"{ty:+.2f}", f"{theta:+.3f}", f"{scale:.3f}"])

    print_table("Patches", ["#", "ROI px", "tx", "ty", "theta", "scale"], rows)
    write_provenance(out, "augment-preview", {"image": image, "mask": mask, "count": count, "size": size, **cfg.to_dict()})
    print_success(f"Wrote {count} patch pairs")
    print_info(f"📁 Patches: {out}")
