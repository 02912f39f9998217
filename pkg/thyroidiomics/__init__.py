"""
thyroidiomics - thyroid scintigraphy radiomics and classification toolkit

This package provides image preprocessing, segmentation evaluation, radiomics
feature extraction, gradient-boosted tree classification and leave-one-center-out
evaluation for planar thyroid scintigraphy, plus a synthetic multi-center phantom
generator so the whole chain can run without patient data.
"""

__version__ = "0.1.0"
__author__ = "thyroidiomics developers"
__description__ = "Radiomics and classification toolkit for thyroid scintigraphy"
