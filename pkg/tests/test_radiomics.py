"""
Tests for the radiomics engine

The full 93-feature vector is checked against the loop-based reference
implementations in ``tests/oracles.py`` on seeded random ROIs; the hand-worked
cases pin individual conventions.
"""

import numpy as np
import pytest

from tests import oracles
from thyroidiomics.errors import DegenerateMatrixError, ExtractionError, InvalidRangeError, UndefinedStatisticError
from thyroidiomics.imaging.discretize import discretize_roi
from thyroidiomics.imaging.grid import BinaryMask, ImageGrid
from thyroidiomics.radiomics import (
    FAMILIES,
    ExtractionConfig,
    compute_glcm,
    extract_all,
    extract_case,
    family_of,
    feature_names,
    first_order_features,
    glcm_features,
    ngtdm_features,
)
from thyroidiomics.radiomics.glszm import zones
from thyroidiomics.radiomics.ngtdm import compute_ngtdm

LOOSE = {"GLCM_MCC"}


def full_mask(shape) -> BinaryMask:
    return BinaryMask(np.ones(shape, dtype=np.uint8))


class TestFeatureNames:
    """Test the canonical feature list"""

    def test_family_counts(self):
        names = feature_names()
        assert len(names) == 93
        assert len(set(names)) == 93
        counts = {family: sum(1 for n in names if family_of(n) == family) for family in FAMILIES}
        assert counts == {"FO": 18, "GLCM": 24, "GLDM": 14, "GLRLM": 16, "GLSZM": 16, "NGTDM": 5}

    def test_sorted_within_family(self):
        names = feature_names()
        for family in FAMILIES:
            members = [n for n in names if family_of(n) == family]
            assert members == sorted(members)

    def test_unknown_family(self):
        with pytest.raises(KeyError):
            family_of("XX_Energy")


class TestOracleEquivalence:
    """Compare every feature with the independent reference implementation"""

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_reference(self, seed):
        pixels, mask = oracles.random_roi(seed)
        vector = extract_all(ImageGrid(pixels), BinaryMask(mask), ExtractionConfig(), f"roi{seed}")
        expected = oracles.all_features(pixels, mask, bin_width=0.3)

        assert set(expected) == set(vector.names)
        for name, value in vector:
            tolerance = 1e-7 if name in LOOSE else 1e-9
            assert value == pytest.approx(expected[name], rel=tolerance, abs=tolerance), name

    def test_deterministic(self):
        pixels, mask = oracles.random_roi(99)
        a = extract_all(ImageGrid(pixels), BinaryMask(mask))
        b = extract_all(ImageGrid(pixels), BinaryMask(mask))
        assert a.values.tobytes() == b.values.tobytes()
        assert a.family_counts() == {"FO": 18, "GLCM": 24, "GLDM": 14, "GLRLM": 16, "GLSZM": 16, "NGTDM": 5}


class TestFirstOrder:
    """Test hand-computed first-order values"""

    def test_symmetric_roi(self):
        features = first_order_features(ImageGrid(np.array([[1.0, 2.0, 3.0, 4.0]])), full_mask((1, 4)))
        assert features["Skewness"] == pytest.approx(0.0, abs=1e-12)
        assert features["Kurtosis"] == pytest.approx(1.64)
        assert features["10Percentile"] == pytest.approx(1.3)
        assert features["Mean"] == pytest.approx(2.5)
        assert features["Range"] == pytest.approx(3.0)

    def test_total_energy_scales_with_pixel_area(self):
        pixels = np.array([[1.0, 2.0], [3.0, 4.0]])
        unit = first_order_features(ImageGrid(pixels), full_mask((2, 2)))
        scaled = first_order_features(ImageGrid(pixels, (2.0, 3.0)), BinaryMask(np.ones((2, 2), dtype=np.uint8), (2.0, 3.0)))
        assert unit["TotalEnergy"] == pytest.approx(unit["Energy"])
        assert scaled["TotalEnergy"] == pytest.approx(6.0 * scaled["Energy"])

    def test_constant_roi_is_undefined(self):
        with pytest.raises(UndefinedStatisticError):
            first_order_features(ImageGrid(np.full((2, 2), 5.0)), full_mask((2, 2)))


class TestTextureMatrices:
    """Test hand-enumerated texture matrices and their conventions"""

    def test_constant_glcm(self):
        droi = discretize_roi(ImageGrid(np.full((2, 2), 1.0)), full_mask((2, 2)), 0.3)
        matrices = compute_glcm(droi, ExtractionConfig(directions=((1, 0),)))
        np.testing.assert_array_equal(matrices[0].matrix, [[1.0]])

        features = glcm_features(compute_glcm(droi, ExtractionConfig()))
        assert features["ClusterShade"] == 0.0
        assert features["Correlation"] == 1.0

    def test_two_level_glcm(self):
        droi = discretize_roi(ImageGrid(np.array([[0.0, 0.3]])), full_mask((1, 2)), 0.3)
        matrices = compute_glcm(droi, ExtractionConfig(directions=((1, 0),)))
        np.testing.assert_allclose(matrices[0].matrix, [[0.0, 0.5], [0.5, 0.0]])
        assert glcm_features(matrices)["ClusterShade"] == pytest.approx(0.0, abs=1e-12)

    def test_glcm_entries_sum_to_one(self):
        pixels, mask = oracles.random_roi(5)
        droi = discretize_roi(ImageGrid(pixels), BinaryMask(mask), 0.3)
        for matrix in compute_glcm(droi, ExtractionConfig()):
            assert matrix.matrix.sum() == pytest.approx(1.0)
            np.testing.assert_allclose(matrix.matrix, matrix.matrix.T)

    def test_glcm_skips_directions_without_pairs(self):
        droi = discretize_roi(ImageGrid(np.array([[0.0], [0.3]])), full_mask((2, 1)), 0.3)
        matrices = compute_glcm(droi, ExtractionConfig())
        assert [m.direction for m in matrices] == [(0, 1)]

    def test_single_pixel_has_no_pairs(self):
        droi = discretize_roi(ImageGrid(np.array([[1.0]])), full_mask((1, 1)), 0.3)
        with pytest.raises(DegenerateMatrixError):
            compute_glcm(droi, ExtractionConfig())
        with pytest.raises(DegenerateMatrixError):
            compute_ngtdm(droi)

    def test_constant_ngtdm(self):
        droi = discretize_roi(ImageGrid(np.full((3, 3), 2.0)), full_mask((3, 3)), 0.3)
        features = ngtdm_features(droi, ExtractionConfig(coarseness_cap=1e6))
        assert features["Contrast"] == 0.0
        assert features["Coarseness"] == 1e6

    def test_glszm_zones(self):
        droi = discretize_roi(ImageGrid(np.array([[0.0, 0.0], [0.3, 0.3]])), full_mask((2, 2)), 0.3)
        levels, areas = zones(droi)
        assert levels.tolist() == [1, 2]
        assert areas.tolist() == [2, 2]

    def test_glszm_uses_eight_connectivity(self):
        pixels = np.array([[0.0, 1.0], [1.0, 0.0]])
        droi = discretize_roi(ImageGrid(pixels), full_mask((2, 2)), 0.3)
        levels, areas = zones(droi)
        assert sorted(zip(levels.tolist(), areas.tolist())) == [(1, 2), (4, 2)]


class TestExtractAll:
    """Test full-vector extraction"""

    def test_degenerate_roi(self):
        mask = np.zeros((8, 8), dtype=np.uint8)
        mask[3, 3] = 1
        with pytest.raises(ExtractionError, match="c01_MNG_000"):
            extract_all(ImageGrid(np.random.default_rng(0).normal(size=(8, 8))), BinaryMask(mask), case_id="c01_MNG_000")

    def test_empty_roi(self):
        with pytest.raises(ExtractionError):
            extract_all(ImageGrid(np.ones((4, 4))), BinaryMask(np.zeros((4, 4), dtype=np.uint8)))

    def test_extract_case_resamples(self):
        pixels, mask = oracles.random_roi(3, size=16)
        img = ImageGrid(pixels + 10.0, (2.0, 2.0))
        roi = BinaryMask(mask, (2.0, 2.0))
        vector = extract_case(img, roi, ExtractionConfig(), "c")
        assert len(vector) == 93
        assert np.isfinite(vector.values).all()
        assert vector["FO_TotalEnergy"] == pytest.approx(vector["FO_Energy"])

    def test_config_validation(self):
        with pytest.raises(InvalidRangeError):
            ExtractionConfig(bin_width=0)
        cfg = ExtractionConfig(bin_width=0.25, gldm_alpha=1.0)
        assert ExtractionConfig.from_dict(cfg.to_dict()) == cfg
