"""
Synthetic multi-center thyroid scintigraphy phantom

Each case is a two-lobe gland (two tilted ellipses) on a faint background,
with Poisson counts drawn around a label-specific activity model:

- DG: enlarged gland with uniform high uptake
- MNG: moderate uptake carrying 2-4 Gaussian hot or cold nodules
- TH: low uptake

Centers differ by a multiplicative gain and a gland-size factor; one center
can be acquired on a finer 256x256 grid. Every case also gets a "predicted"
mask: the ground truth with a seeded boundary ring eroded or dilated.
Randomness is keyed by (seed, case), so the output is byte-identical for a
given spec regardless of worker count.
"""

import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy import ndimage

from ..errors import InvalidRangeError
from ..evaluation.metrics import CATEGORIES
from ..imaging.grid import BinaryMask, ImageGrid
from ..imaging.scin_io import write_scin
from ..utils.file_utils import ensure_directory
from ..utils.parallel import ordered_map
from ..utils.rng import generator
from .manifest import CaseRecord, DatasetManifest, save_manifest

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"

# Gland geometry in mm for a 128 mm field of view
LOBE_SEMI_AXES_MM = (10.0, 22.0)
LOBE_GAP_MM = 3.0
DG_ENLARGEMENT = 1.35
EDGE_SIGMA_MM = 1.5


@dataclass(frozen=True)
class PhantomSpec:
    """
    Phantom dataset parameters

    Attributes:
        centers: Number of centers (ids 1..centers)
        per_center: Cases per center for MNG, TH, DG
        size: Image side in pixels (1 mm spacing)
        large_center: Center acquired at twice the size and half the spacing (None for none)
        label_levels: Mean gland counts per pixel for MNG, TH, DG
        background: Mean background counts per pixel
        gain_range: Per-center multiplicative gain bounds
        size_jitter: Per-center gland-size factor bounds
        perturb_mm: Width of the boundary ring used for predicted masks
        flip_probability: Chance that a ring pixel is flipped
        seed: Global seed
    """

    centers: int = 9
    per_center: Tuple[int, int, int] = (20, 20, 20)
    size: int = 128
    large_center: Optional[int] = 5
    label_levels: Tuple[float, float, float] = (20.0, 3.0, 40.0)
    background: float = 0.3
    gain_range: Tuple[float, float] = (0.85, 1.15)
    size_jitter: Tuple[float, float] = (0.9, 1.1)
    perturb_mm: float = 2.0
    flip_probability: float = 0.8
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_center", tuple(int(n) for n in self.per_center))
        object.__setattr__(self, "label_levels", tuple(float(v) for v in self.label_levels))
        object.__setattr__(self, "gain_range", tuple(float(v) for v in self.gain_range))
        object.__setattr__(self, "size_jitter", tuple(float(v) for v in self.size_jitter))
        errors = self.validate()
        if errors:
            raise InvalidRangeError("; ".join(errors))

    def validate(self) -> List[str]:
        errors = []
        if self.centers < 1:
            errors.append("centers must be >= 1")
        if len(self.per_center) != len(CATEGORIES) or any(n < 0 for n in self.per_center):
            errors.append("per_center must hold three counts >= 0 (MNG, TH, DG)")
        if self.size < 32:
            errors.append("size must be >= 32")
        if len(self.label_levels) != len(CATEGORIES) or any(v <= 0 for v in self.label_levels):
            errors.append("label_levels must hold three positive values")
        if self.background < 0:
            errors.append("background must be >= 0")
        lo, hi = self.gain_range
        if not 0 < lo <= hi:
            errors.append("gain_range must satisfy 0 < lo <= hi")
        lo, hi = self.size_jitter
        if not 0 < lo <= hi:
            errors.append("size_jitter must satisfy 0 < lo <= hi")
        if self.perturb_mm < 0:
            errors.append("perturb_mm must be >= 0")
        if not 0.0 <= self.flip_probability <= 1.0:
            errors.append("flip_probability must lie in [0, 1]")
        return errors

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PhantomSpec":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key in ("per_center", "label_levels", "gain_range", "size_jitter"):
            data[key] = list(data[key])
        return data

    def grid_for(self, center_id: int) -> Tuple[int, float]:
        """``(pixels per side, spacing in mm)`` for a center"""
        if self.large_center is not None and center_id == self.large_center:
            return 2 * self.size, 0.5
        return self.size, 1.0


@dataclass(frozen=True)
class PhantomCase:
    case_id: str
    center_id: int
    label: str
    index: int


def case_id_for(center_id: int, label: str, index: int) -> str:
    return f"c{center_id:02d}_{label}_{index:03d}"


def center_dir_name(center_id: int) -> str:
    return f"center_{center_id:02d}"


def plan_cases(spec: PhantomSpec) -> List[PhantomCase]:
    """Cases in output order: by center, then label (MNG, TH, DG), then index"""
    return [
        PhantomCase(case_id_for(center, label, index), center, label, index)
        for center in range(1, spec.centers + 1)
        for label, count in zip(CATEGORIES, spec.per_center)
        for index in range(count)
    ]


def center_effects(spec: PhantomSpec, center_id: int) -> Tuple[float, float]:
    """``(gain, size factor)`` of a center"""
    rng = generator(spec.seed, "center", center_id)
    gain = rng.uniform(*spec.gain_range)
    size_factor = rng.uniform(*spec.size_jitter)
    return float(gain), float(size_factor)


def _coordinates(n: int, spacing: float, field_mm: float) -> Tuple[np.ndarray, np.ndarray]:
    centers = (np.arange(n) + 0.5) * spacing - field_mm / 2.0
    return np.meshgrid(centers, centers)


def gland_silhouette(
    x: np.ndarray, y: np.ndarray, scale: float, tilt_deg: float, offset: Tuple[float, float]
) -> np.ndarray:
    """Union of two mirrored, tilted ellipses centred on ``offset`` (mm)"""
    a, b = LOBE_SEMI_AXES_MM[0] * scale, LOBE_SEMI_AXES_MM[1] * scale
    silhouette = np.zeros(x.shape, dtype=bool)
    for side in (-1.0, 1.0):
        cx = offset[0] + side * (a + LOBE_GAP_MM / 2.0)
        cy = offset[1]
        theta = np.deg2rad(side * tilt_deg)
        dx, dy = x - cx, y - cy
        u = dx * np.cos(theta) + dy * np.sin(theta)
        v = -dx * np.sin(theta) + dy * np.cos(theta)
        silhouette |= (u / a) ** 2 + (v / b) ** 2 <= 1.0
    return silhouette


def _nodule_field(
    rng: np.random.Generator, x: np.ndarray, y: np.ndarray, silhouette: np.ndarray
) -> np.ndarray:
    """Multiplicative uptake modulation from 2-4 Gaussian nodules inside the gland"""
    field = np.ones(x.shape)
    inside = np.flatnonzero(silhouette)
    for _ in range(int(rng.integers(2, 5))):
        pick = inside[int(rng.integers(inside.size))]
        cx, cy = x.flat[pick], y.flat[pick]
        radius = rng.uniform(2.5, 5.0)
        amplitude = rng.uniform(0.8, 1.8) if rng.random() < 0.6 else -rng.uniform(0.5, 0.8)
        field += amplitude * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2.0 * radius ** 2))
    return np.clip(field, 0.05, None)


def perturb_mask(
    mask: np.ndarray, rng: np.random.Generator, width_px: int, flip_probability: float
) -> np.ndarray:
    """
    Erode or dilate a seeded fraction of a ``width_px`` boundary ring

    Phantom cases use a 2 mm ring flipped with probability 0.8 rather than a
    single-pixel boundary change.

    Falls back to the unperturbed mask when erosion would empty it.
    """
    if width_px < 1:
        return mask.copy()
    dilate = bool(rng.random() < 0.5)
    structure = ndimage.generate_binary_structure(2, 1)
    if dilate:
        ring = ndimage.binary_dilation(mask, structure, iterations=width_px) & ~mask
    else:
        ring = mask & ~ndimage.binary_erosion(mask, structure, iterations=width_px)
    flips = ring & (rng.random(mask.shape) < flip_probability)
    perturbed = (mask | flips) if dilate else (mask & ~flips)
    return perturbed if perturbed.any() else mask.copy()


def synthesize_case(spec: PhantomSpec, case: PhantomCase) -> Tuple[ImageGrid, BinaryMask, BinaryMask]:
    """Image, ground-truth mask and predicted mask of one case"""
    n, spacing = spec.grid_for(case.center_id)
    field_mm = spec.size * 1.0
    gain, size_factor = center_effects(spec, case.center_id)
    rng = generator(spec.seed, "case", case.case_id)

    x, y = _coordinates(n, spacing, field_mm)
    scale = size_factor * rng.uniform(0.95, 1.05)
    if case.label == "DG":
        scale *= DG_ENLARGEMENT
    tilt = rng.uniform(5.0, 15.0)
    offset = (rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0))
    silhouette = gland_silhouette(x, y, scale, tilt, offset)

    smooth = ndimage.gaussian_filter(silhouette.astype(np.float64), sigma=EDGE_SIGMA_MM / spacing)
    level = spec.label_levels[CATEGORIES.index(case.label)]
    uptake = level * smooth
    if case.label == "MNG":
        uptake = uptake * _nodule_field(rng, x, y, silhouette)
    activity = gain * (spec.background + uptake)
    counts = rng.poisson(activity).astype(np.float64)

    width_px = int(round(spec.perturb_mm / spacing))
    predicted = perturb_mask(silhouette, rng, width_px, spec.flip_probability)

    grid_spacing = (spacing, spacing)
    return (
        ImageGrid(counts, grid_spacing),
        BinaryMask(silhouette, grid_spacing),
        BinaryMask(predicted, grid_spacing),
    )


def _case_paths(out_dir: Path, case: PhantomCase) -> Tuple[Path, Path, Path]:
    base = out_dir / center_dir_name(case.center_id) / case.case_id
    return (
        base.with_name(f"{case.case_id}_image.json"),
        base.with_name(f"{case.case_id}_mask.json"),
        base.with_name(f"{case.case_id}_pred.json"),
    )


def _write_case(job: Tuple[PhantomSpec, PhantomCase, Path]) -> CaseRecord:
    spec, case, out_dir = job
    image, mask, predicted = synthesize_case(spec, case)
    image_path, mask_path, pred_path = _case_paths(out_dir, case)
    ensure_directory(image_path.parent)
    write_scin(image, image_path, dtype="u16")
    write_scin(mask, mask_path)
    write_scin(predicted, pred_path)
    return CaseRecord(case.case_id, case.center_id, case.label, image_path, mask_path, pred_path)


def generate_dataset(spec: PhantomSpec, out_dir: Path, workers: Optional[int] = None) -> DatasetManifest:
    """
    Write every phantom case as SCIN files plus ``manifest.json``

    Returns:
        The manifest of the written dataset
    """
    out_dir = Path(out_dir)
    ensure_directory(out_dir)
    cases = plan_cases(spec)
    logger.info("Generating %d phantom cases over %d centers", len(cases), spec.centers)
    records = ordered_map(_write_case, [(spec, case, out_dir) for case in cases], workers)
    manifest = DatasetManifest(tuple(records))
    save_manifest(manifest, out_dir / MANIFEST_NAME)
    return manifest
