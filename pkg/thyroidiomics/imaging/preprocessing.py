"""
Preprocessing chains applied before segmentation and before radiomics
"""

from typing import Tuple, Union

from .grid import BinaryMask, ImageGrid, check_geometry, clip_intensities, minmax_normalize, zscore_normalize
from .resample import Interpolator, resample

SEGMENTATION_CLIP = (0.0, 550.0)
ISOTROPIC_1MM = (1.0, 1.0)


def prepare_for_segmentation(
    img: ImageGrid,
    mask: BinaryMask,
    clip: Tuple[float, float] = SEGMENTATION_CLIP,
    spacing: Tuple[float, float] = ISOTROPIC_1MM,
) -> Tuple[ImageGrid, BinaryMask]:
    """Clip, min-max normalize, then resample (image bilinear, mask nearest)"""
    check_geometry(img, mask)
    normalized = minmax_normalize(clip_intensities(img, *clip))
    image_out = resample(normalized, target_spacing=spacing, method=Interpolator.BILINEAR)
    mask_out = resample(mask, target_spacing=spacing, method=Interpolator.NEAREST)
    return image_out, mask_out  # type: ignore[return-value]


def prepare_for_radiomics(
    img: ImageGrid,
    mask: BinaryMask,
    spacing: Tuple[float, float] = ISOTROPIC_1MM,
    method: Union[str, Interpolator] = Interpolator.CUBIC,
    normalize: bool = True,
) -> Tuple[ImageGrid, BinaryMask]:
    """Whole-image z-score, then resample (image with ``method``, mask nearest)"""
    check_geometry(img, mask)
    image = zscore_normalize(img) if normalize else img
    image_out = resample(image, target_spacing=spacing, method=method)
    mask_out = resample(mask, target_spacing=spacing, method=Interpolator.NEAREST)
    return image_out, mask_out  # type: ignore[return-value]
