"""
Radiomics feature extraction: first-order statistics and five texture-matrix families
"""

from .base import FAMILIES, FAMILY_FEATURES, ExtractionConfig, TextureMatrix, family_of, feature_names
from .extractor import FeatureVector, extract_all, extract_case
from .first_order import first_order_features
from .glcm import compute_glcm, glcm_features
from .gldm import gldm_features
from .glrlm import glrlm_features
from .glszm import glszm_features
from .ngtdm import ngtdm_features

__all__ = [
    "FAMILIES",
    "FAMILY_FEATURES",
    "ExtractionConfig",
    "FeatureVector",
    "TextureMatrix",
    "compute_glcm",
    "extract_all",
    "extract_case",
    "family_of",
    "feature_names",
    "first_order_features",
    "glcm_features",
    "gldm_features",
    "glrlm_features",
    "glszm_features",
    "ngtdm_features",
]
