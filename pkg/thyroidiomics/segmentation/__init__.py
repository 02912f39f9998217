"""
Segmentation evaluation utilities
"""

from .evaluation import binarize, dice_fp_loss, dsc, roi_counts, sliding_window_apply

__all__ = ["binarize", "dice_fp_loss", "dsc", "roi_counts", "sliding_window_apply"]
