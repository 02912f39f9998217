"""
Tests for segmentation-side evaluation
"""

import numpy as np
import pytest

from thyroidiomics.errors import ContractError, GeometryMismatchError, InvalidRangeError
from thyroidiomics.imaging.grid import BinaryMask, ImageGrid, ProbabilityMap
from thyroidiomics.segmentation.evaluation import (
    binarize,
    dice_fp_loss,
    dsc,
    roi_counts,
    sliding_window_apply,
    tile_grid,
)


def mask_of(values) -> BinaryMask:
    return BinaryMask(np.array(values, dtype=np.uint8))


class TestDiceFpLoss:
    """Test the Dice + false-positive loss"""

    def setup_method(self):
        values = np.zeros((10, 10), dtype=np.uint8)
        values[2:6, 3:8] = 1
        self.gt = BinaryMask(values)

    def test_perfect_prediction(self):
        pred = ProbabilityMap(self.gt.values.astype(float))
        assert dice_fp_loss(pred, self.gt) == pytest.approx(0.0, abs=1e-12)

    def test_empty_empty(self):
        empty = BinaryMask(np.zeros((10, 10), dtype=np.uint8))
        assert dice_fp_loss(ProbabilityMap(np.zeros((10, 10))), empty) == pytest.approx(0.0, abs=1e-12)

    def test_all_false_positive(self):
        empty = BinaryMask(np.zeros((10, 10), dtype=np.uint8))
        loss = dice_fp_loss(ProbabilityMap(np.ones((10, 10))), empty, alpha=2.0, eps=1e-5)
        expected = 1 - 1e-5 / (100 + 1e-5) + 2 * 100 / (100 + 1e-5)
        assert loss == pytest.approx(expected, rel=1e-12)
        assert loss == pytest.approx(3.0, abs=1e-6)

    @pytest.mark.parametrize("seed", range(100))
    def test_monotone_in_alpha(self, seed):
        rng = np.random.default_rng(seed)
        shape = tuple(int(s) for s in rng.integers(4, 24, size=2))
        gt = BinaryMask(rng.random(shape) < rng.uniform(0.1, 0.9))
        probabilities = rng.random(shape) * (rng.random(shape) < rng.uniform(0.2, 1.0))
        alphas = np.sort(rng.uniform(0.0, 5.0, 6))

        pred = ProbabilityMap(probabilities)
        losses = [dice_fp_loss(pred, gt, alpha=a) for a in alphas]
        assert losses == sorted(losses)
        false_positive = float((probabilities * (1 - gt.values)).sum())
        if false_positive > 0:
            assert losses[0] < losses[-1]

        inside = ProbabilityMap(probabilities * gt.values)
        constant = [dice_fp_loss(inside, gt, alpha=a) for a in alphas]
        assert constant == [constant[0]] * len(alphas)

    def test_invalid_arguments(self):
        pred = ProbabilityMap(np.zeros((10, 10)))
        with pytest.raises(InvalidRangeError):
            dice_fp_loss(pred, self.gt, eps=0.0)
        with pytest.raises(InvalidRangeError):
            dice_fp_loss(pred, self.gt, alpha=-1.0)
        with pytest.raises(GeometryMismatchError):
            dice_fp_loss(ProbabilityMap(np.zeros((5, 5))), self.gt)


class TestDsc:
    """Test the Dice similarity coefficient"""

    def test_identical(self):
        a = mask_of([[1, 1, 0], [0, 1, 0]])
        assert dsc(a, a) == 1.0

    def test_disjoint(self):
        assert dsc(mask_of([[1, 0], [0, 0]]), mask_of([[0, 0], [0, 1]])) == 0.0

    def test_half_overlap(self):
        a = mask_of([[1, 1, 1, 1, 0, 0]])
        b = mask_of([[0, 0, 1, 1, 1, 1]])
        assert dsc(a, b) == pytest.approx(0.5)

    def test_both_empty(self):
        empty = mask_of([[0, 0]])
        assert dsc(empty, empty) == 1.0

    def test_symmetric(self):
        a = mask_of([[1, 1, 0, 1]])
        b = mask_of([[0, 1, 1, 1]])
        assert dsc(a, b) == dsc(b, a)


class TestSlidingWindow:
    """Test tiled scoring with overlap averaging"""

    def setup_method(self):
        self.img = ImageGrid(np.random.default_rng(0).uniform(0, 1, (12, 12)))

    def test_single_tile(self):
        result = sliding_window_apply(self.img, 64, lambda tile: tile)
        np.testing.assert_allclose(result.pixels, self.img.pixels)

    def test_constant_scorer(self):
        result = sliding_window_apply(self.img, 4, lambda tile: np.full(tile.shape, 0.7))
        np.testing.assert_allclose(result.pixels, 0.7)

    def test_overlap_is_averaged(self):
        outputs = iter([0.2, 0.6])
        img = ImageGrid(np.zeros((1, 6)))
        assert tile_grid(1, 6, 4) == [(0, 0, 1, 4), (0, 2, 1, 4)]

        result = sliding_window_apply(img, 4, lambda tile: np.full(tile.shape, next(outputs)))
        np.testing.assert_allclose(result.pixels[0], [0.2, 0.2, 0.4, 0.4, 0.6, 0.6])

    def test_tiles_cover_image(self):
        covered = np.zeros((12, 12), dtype=int)
        for r, c, h, w in tile_grid(12, 12, 5):
            covered[r : r + h, c : c + w] += 1
        assert covered.min() >= 1

    def test_scorer_contract(self):
        with pytest.raises(ContractError):
            sliding_window_apply(self.img, 4, lambda tile: tile[:2])
        with pytest.raises(ContractError):
            sliding_window_apply(self.img, 4, lambda tile: tile + 2.0)

    def test_invalid_window(self):
        with pytest.raises(InvalidRangeError):
            sliding_window_apply(self.img, 0, lambda tile: tile)


class TestBinarizeAndCounts:
    """Test thresholding and ROI count totals"""

    def test_binarize(self):
        assert binarize(ProbabilityMap(np.ones((2, 2)))).count == 4
        assert binarize(ProbabilityMap(np.zeros((2, 2)))).count == 0
        out = binarize(ProbabilityMap(np.array([[0.49, 0.5, 0.51]])), 0.5)
        assert out.values.tolist() == [[0, 1, 1]]

    def test_binarize_threshold_range(self):
        with pytest.raises(InvalidRangeError):
            binarize(ProbabilityMap(np.zeros((1, 1))), 1.5)

    def test_roi_counts(self):
        img = ImageGrid(np.array([[10.0, 20.0, 30.0]]))
        assert roi_counts(img, mask_of([[1, 0, 1]])) == 40.0
        assert roi_counts(img, mask_of([[0, 0, 0]])) == 0.0
        assert roi_counts(img, mask_of([[1, 1, 1]])) == 60.0
