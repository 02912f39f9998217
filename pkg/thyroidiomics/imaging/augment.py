"""
Seeded training-time augmentation

Both transforms draw from a counter-based stream keyed by
``(cfg.seed, case_id, draw_index)``, so a draw is a pure function of its
inputs no matter how calls are scheduled.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Tuple

import numpy as np

from ..errors import InvalidRangeError, SamplingError
from ..utils.rng import generator
from .grid import BinaryMask, ImageGrid, check_geometry
from .resample import Interpolator, affine_sample

PATCH_STREAM = 0
AFFINE_STREAM = 1


@dataclass(frozen=True)
class AugmentConfig:
    """Randomized transform settings"""

    patch_size: int = 64
    fg_center_prob: float = 2.0 / 3.0
    translation_range: float = 5.0
    rotation_range: float = math.pi / 12.0
    scale_limit: float = 1.1
    seed: int = 0

    def __post_init__(self) -> None:
        errors = self.validate()
        if errors:
            raise InvalidRangeError("; ".join(errors))

    def validate(self) -> List[str]:
        errors = []
        if self.patch_size <= 0:
            errors.append("patch_size must be > 0")
        if not 0.0 <= self.fg_center_prob <= 1.0:
            errors.append("fg_center_prob must lie in [0, 1]")
        if self.scale_limit < 1.0:
            errors.append("scale_limit must be >= 1")
        if self.translation_range < 0 or self.rotation_range < 0:
            errors.append("translation_range and rotation_range must be >= 0")
        return errors

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AugmentConfig":
        fields = cls.__dataclass_fields__
        return cls(**{k: v for k, v in data.items() if k in fields})

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def sample_patch(
    img: ImageGrid,
    mask: BinaryMask,
    cfg: AugmentConfig,
    draw_index: int,
    case_id: str = "",
) -> Tuple[ImageGrid, BinaryMask]:
    """
    Crop a class-balanced square patch

    With probability ``cfg.fg_center_prob`` the patch center is drawn uniformly
    from the foreground, otherwise from the background. The center pixel sits at
    index ``patch_size // 2`` of the patch; out-of-grid pixels replicate the edge.

    Raises:
        SamplingError: If the mask has no foreground or no background pixel
    """
    check_geometry(img, mask)
    flat = mask.values.ravel()
    foreground = np.flatnonzero(flat == 1)
    background = np.flatnonzero(flat == 0)
    if foreground.size == 0 or background.size == 0:
        raise SamplingError("patch sampling needs both foreground and background pixels")

    rng = generator(cfg.seed, case_id, draw_index, PATCH_STREAM)
    pool = foreground if rng.random() < cfg.fg_center_prob else background
    center = int(pool[rng.integers(pool.size)])
    cy, cx = divmod(center, img.width)

    half = cfg.patch_size // 2
    rows = np.clip(np.arange(cy - half, cy - half + cfg.patch_size), 0, img.height - 1)
    cols = np.clip(np.arange(cx - half, cx - half + cfg.patch_size), 0, img.width - 1)
    window = np.ix_(rows, cols)
    return (
        ImageGrid(img.pixels[window], img.spacing),
        BinaryMask(mask.values[window], mask.spacing),
    )


def draw_affine(cfg: AugmentConfig, draw_index: int, case_id: str = "") -> Tuple[float, float, float, float]:
    """Draw ``(tx, ty, theta, scale)`` for one affine augmentation"""
    rng = generator(cfg.seed, case_id, draw_index, AFFINE_STREAM)
    tx, ty = rng.uniform(-cfg.translation_range, cfg.translation_range, size=2)
    theta = rng.uniform(-cfg.rotation_range, cfg.rotation_range)
    scale = rng.uniform(1.0 / cfg.scale_limit, cfg.scale_limit)
    return float(tx), float(ty), float(theta), float(scale)


def random_affine(
    img: ImageGrid,
    mask: BinaryMask,
    cfg: AugmentConfig,
    draw_index: int,
    case_id: str = "",
) -> Tuple[ImageGrid, BinaryMask]:
    """
    Scale, rotate about the grid center, then translate; one interpolation pass

    The image is resampled bilinearly and the mask by nearest neighbor.
    """
    check_geometry(img, mask)
    tx, ty, theta, scale = draw_affine(cfg, draw_index, case_id)

    # forward: p' = s R (p - c) + c + t  =>  p = R^T (p' - c - t) / s + c
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    inverse = np.array([[cos_t, sin_t], [-sin_t, cos_t]]) / scale
    center = np.array([(img.width - 1) / 2.0, (img.height - 1) / 2.0])
    offset = center - inverse @ (center + np.array([tx, ty]))

    warped_img = affine_sample(img, inverse, offset, Interpolator.BILINEAR)
    warped_mask = affine_sample(mask, inverse, offset, Interpolator.NEAREST)
    return warped_img, warped_mask  # type: ignore[return-value]
