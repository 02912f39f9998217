"""
Shared definitions for radiomics feature extraction

Feature names are ``<FAMILY>_<FeatureName>``. The canonical order is by family
(FO, GLCM, GLDM, GLRLM, GLSZM, NGTDM), then alphabetical within a family.
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from ..errors import InvalidRangeError

EPS = float(np.spacing(1))

Direction = Tuple[int, int]
DEFAULT_DIRECTIONS: Tuple[Direction, ...] = ((1, 0), (0, 1), (1, 1), (1, -1))

# 8-connected neighborhood offsets (dx, dy)
NEIGHBORS_8: Tuple[Direction, ...] = (
    (-1, -1), (0, -1), (1, -1),
    (-1, 0), (1, 0),
    (-1, 1), (0, 1), (1, 1),
)

FAMILIES: Tuple[str, ...] = ("FO", "GLCM", "GLDM", "GLRLM", "GLSZM", "NGTDM")

FAMILY_FEATURES: Dict[str, Tuple[str, ...]] = {
    "FO": (
        "Energy", "TotalEnergy", "Entropy", "Minimum", "10Percentile", "90Percentile",
        "Maximum", "Mean", "Median", "InterquartileRange", "Range", "MeanAbsoluteDeviation",
        "RobustMeanAbsoluteDeviation", "RootMeanSquared", "Skewness", "Kurtosis",
        "Variance", "Uniformity",
    ),
    "GLCM": (
        "Autocorrelation", "JointAverage", "ClusterProminence", "ClusterShade",
        "ClusterTendency", "Contrast", "Correlation", "DifferenceAverage",
        "DifferenceEntropy", "DifferenceVariance", "JointEnergy", "JointEntropy",
        "Imc1", "Imc2", "Idm", "MCC", "Idmn", "Id", "Idn", "InverseVariance",
        "MaximumProbability", "SumAverage", "SumEntropy", "SumSquares",
    ),
    "GLDM": (
        "SmallDependenceEmphasis", "LargeDependenceEmphasis", "GrayLevelNonUniformity",
        "DependenceNonUniformity", "DependenceNonUniformityNormalized", "GrayLevelVariance",
        "DependenceVariance", "DependenceEntropy", "LowGrayLevelEmphasis",
        "HighGrayLevelEmphasis", "SmallDependenceLowGrayLevelEmphasis",
        "SmallDependenceHighGrayLevelEmphasis", "LargeDependenceLowGrayLevelEmphasis",
        "LargeDependenceHighGrayLevelEmphasis",
    ),
    "GLRLM": (
        "ShortRunEmphasis", "LongRunEmphasis", "GrayLevelNonUniformity",
        "GrayLevelNonUniformityNormalized", "RunLengthNonUniformity",
        "RunLengthNonUniformityNormalized", "RunPercentage", "GrayLevelVariance",
        "RunVariance", "RunEntropy", "LowGrayLevelRunEmphasis", "HighGrayLevelRunEmphasis",
        "ShortRunLowGrayLevelEmphasis", "ShortRunHighGrayLevelEmphasis",
        "LongRunLowGrayLevelEmphasis", "LongRunHighGrayLevelEmphasis",
    ),
    "GLSZM": (
        "SmallAreaEmphasis", "LargeAreaEmphasis", "GrayLevelNonUniformity",
        "GrayLevelNonUniformityNormalized", "SizeZoneNonUniformity",
        "SizeZoneNonUniformityNormalized", "ZonePercentage", "GrayLevelVariance",
        "ZoneVariance", "ZoneEntropy", "LowGrayLevelZoneEmphasis", "HighGrayLevelZoneEmphasis",
        "SmallAreaLowGrayLevelEmphasis", "SmallAreaHighGrayLevelEmphasis",
        "LargeAreaLowGrayLevelEmphasis", "LargeAreaHighGrayLevelEmphasis",
    ),
    "NGTDM": ("Coarseness", "Contrast", "Busyness", "Complexity", "Strength"),
}


def feature_names() -> List[str]:
    """The 93 canonical feature names in canonical order"""
    return [
        f"{family}_{name}"
        for family in FAMILIES
        for name in sorted(FAMILY_FEATURES[family])
    ]


def family_of(name: str) -> str:
    """Family prefix of a canonical feature name"""
    family = name.split("_", 1)[0]
    if family not in FAMILY_FEATURES:
        raise KeyError(name)
    return family


@dataclass(frozen=True)
class ExtractionConfig:
    """
    Radiomics extraction settings

    Attributes:
        bin_width: Fixed gray-level bin width
        glcm_distance: Pixel offset length for co-occurrence pairs
        directions: Unique 2D offsets used by GLCM and GLRLM
        coarseness_cap: NGTDM Coarseness when its denominator is 0
        gldm_alpha: Largest level difference for two GLDM neighbors to be dependent
        resampled_spacing: Pixel spacing (mm) the image is resampled to before extraction
        interpolator: Image interpolator for that resampling
        normalize: Whole-image z-score before resampling
    """

    bin_width: float = 0.3
    glcm_distance: int = 1
    directions: Tuple[Direction, ...] = DEFAULT_DIRECTIONS
    coarseness_cap: float = 1e6
    gldm_alpha: float = 0.0
    resampled_spacing: Tuple[float, float] = (1.0, 1.0)
    interpolator: str = "cubic"
    normalize: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "directions", tuple((int(dx), int(dy)) for dx, dy in self.directions)
        )
        object.__setattr__(
            self, "resampled_spacing", tuple(float(s) for s in self.resampled_spacing)
        )
        errors = self.validate()
        if errors:
            raise InvalidRangeError("; ".join(errors))

    def validate(self) -> List[str]:
        errors = []
        if not self.bin_width > 0:
            errors.append("bin_width must be > 0")
        if self.glcm_distance < 1:
            errors.append("glcm_distance must be >= 1")
        if not self.directions or any(d == (0, 0) for d in self.directions):
            errors.append("directions must be non-empty and non-zero")
        if not self.coarseness_cap > 0:
            errors.append("coarseness_cap must be > 0")
        if self.gldm_alpha < 0:
            errors.append("gldm_alpha must be >= 0")
        return errors

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExtractionConfig":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        if "directions" in known:
            known["directions"] = tuple(tuple(d) for d in known["directions"])
        if "resampled_spacing" in known:
            known["resampled_spacing"] = tuple(known["resampled_spacing"])
        return cls(**known)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["directions"] = [list(d) for d in self.directions]
        data["resampled_spacing"] = list(self.resampled_spacing)
        return data


@dataclass(frozen=True, eq=False)
class TextureMatrix:
    """
    A texture matrix of one family

    ``GLCM`` entries are probabilities summing to 1; ``GLRLM``, ``GLSZM`` and
    ``GLDM`` hold raw integer counts; ``NGTDM`` rows are ``(n_i, p_i, s_i)``.
    """

    kind: str
    matrix: np.ndarray
    direction: Tuple[int, int] = (0, 0)
    meta: Dict[str, Any] = field(default_factory=dict)
