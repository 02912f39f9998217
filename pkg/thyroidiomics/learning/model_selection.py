"""
Stratified k-fold splitting and grid-search hyperparameter selection
"""

import itertools
import logging
from dataclasses import replace
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import FoldError, InvalidArgumentError, InvalidRangeError
from ..utils.parallel import ordered_map
from ..utils.rng import generator
from .gbdt import GbdtHyperparams, predict, train

logger = logging.getLogger(__name__)

DEFAULT_FOLDS = 5
DEFAULT_LATTICE_AXES: Dict[str, List[Any]] = {
    "n_rounds": [50, 100, 200],
    "max_depth": [2, 3, 4],
    "learning_rate": [0.05, 0.1, 0.3],
    "l2_reg": [1.0],
    "min_split_gain": [0.0],
}
QUICK_LATTICE_AXES: Dict[str, List[Any]] = {
    "n_rounds": [20, 50],
    "max_depth": [2, 3],
    "learning_rate": [0.3],
}
LATTICE_PRESETS: Dict[str, Dict[str, List[Any]]] = {
    "default": DEFAULT_LATTICE_AXES,
    "quick": QUICK_LATTICE_AXES,
}


def lattice_from_axes(axes: Dict[str, Sequence[Any]]) -> List[GbdtHyperparams]:
    """
    Cartesian product of hyperparameter axes

    Axes are iterated in the order ``n_rounds, max_depth, learning_rate,
    l2_reg, min_split_gain`` with the last one varying fastest. Missing axes
    take the ``GbdtHyperparams`` default.
    """
    unknown = set(axes) - set(DEFAULT_LATTICE_AXES)
    if unknown:
        raise InvalidArgumentError(f"unknown lattice axes: {sorted(unknown)}")
    defaults = GbdtHyperparams()
    names = list(DEFAULT_LATTICE_AXES)
    values = [list(axes.get(name, [getattr(defaults, name)])) for name in names]
    if any(not v for v in values):
        raise InvalidArgumentError("every lattice axis needs at least one value")
    return [GbdtHyperparams(**dict(zip(names, point))) for point in itertools.product(*values)]


def default_lattice() -> List[GbdtHyperparams]:
    """The 27-point default lattice"""
    return lattice_from_axes(DEFAULT_LATTICE_AXES)


def resolve_lattice(value: Union[str, Dict[str, Sequence[Any]], None]) -> List[GbdtHyperparams]:
    """A lattice from a preset name (``default``, ``quick``) or an axes mapping"""
    if value is None:
        return default_lattice()
    if isinstance(value, str):
        if value not in LATTICE_PRESETS:
            raise InvalidArgumentError(f"unknown lattice preset {value!r}; choose from {sorted(LATTICE_PRESETS)}")
        return lattice_from_axes(LATTICE_PRESETS[value])
    return lattice_from_axes(value)


def stratified_folds(y: Sequence[str], folds: int, seed: int) -> np.ndarray:
    """
    Fold index per row

    Each category's rows are shuffled with a seeded stream and dealt round-robin,
    the deal continuing across categories so fold sizes stay balanced.

    Raises:
        FoldError: If a category has fewer rows than there are folds
    """
    if folds < 2:
        raise InvalidRangeError(f"folds must be >= 2, got {folds}")
    labels = np.array([str(v) for v in y])
    assignment = np.full(labels.size, -1, dtype=np.int64)
    cursor = 0
    for category in sorted(set(labels.tolist())):
        rows = np.nonzero(labels == category)[0]
        if rows.size < folds:
            raise FoldError(
                f"category {category!r} has {rows.size} samples, fewer than {folds} folds"
            )
        shuffled = generator(seed, "folds", category).permutation(rows)
        assignment[shuffled] = (cursor + np.arange(rows.size)) % folds
        cursor = (cursor + rows.size) % folds
    return assignment


def cv_accuracy(
    X: np.ndarray,
    y: Sequence[str],
    hp: GbdtHyperparams,
    fold_ids: np.ndarray,
    categories: Optional[Sequence[str]] = None,
) -> float:
    """Mean held-out accuracy over the folds in ``fold_ids``"""
    labels = np.array([str(v) for v in y])
    scores = []
    for fold in range(int(fold_ids.max()) + 1):
        held_out = fold_ids == fold
        model = train(X[~held_out], labels[~held_out], hp, categories=categories)
        predicted = np.array(predict(model, X[held_out]))
        scores.append(float(np.mean(predicted == labels[held_out])))
    return float(np.mean(scores))


def _score_point(job: Tuple[np.ndarray, np.ndarray, GbdtHyperparams, np.ndarray, Optional[Tuple[str, ...]]]) -> float:
    X, y, hp, fold_ids, categories = job
    return cv_accuracy(X, y, hp, fold_ids, categories)


def grid_search_scores(
    X: np.ndarray,
    y: Sequence[str],
    grid: Sequence[GbdtHyperparams],
    folds: int = DEFAULT_FOLDS,
    seed: int = 0,
    categories: Optional[Sequence[str]] = None,
    workers: Optional[int] = None,
) -> List[float]:
    """Mean CV accuracy of every lattice point, in lattice order"""
    if not grid:
        raise InvalidArgumentError("hyperparameter lattice is empty")
    X = np.asarray(X, dtype=np.float64)
    labels = np.array([str(v) for v in y])
    fold_ids = stratified_folds(labels, folds, seed)
    cats = tuple(categories) if categories is not None else None
    jobs = [(X, labels, hp, fold_ids, cats) for hp in grid]
    return ordered_map(_score_point, jobs, workers)


def grid_search_cv(
    X: np.ndarray,
    y: Sequence[str],
    grid: Sequence[GbdtHyperparams],
    folds: int = DEFAULT_FOLDS,
    seed: int = 0,
    categories: Optional[Sequence[str]] = None,
    workers: Optional[int] = None,
) -> GbdtHyperparams:
    """
    Pick the lattice point with the best mean stratified-CV accuracy

    Ties go to the earliest lattice point.

    Raises:
        FoldError: If the labels cannot be stratified into ``folds`` folds
    """
    scores = grid_search_scores(X, y, grid, folds, seed, categories, workers)
    best = 0
    for index, score in enumerate(scores):
        if score > scores[best]:
            best = index
    logger.debug("Grid search over %d points: best %s (accuracy %.4f)", len(grid), grid[best].describe(), scores[best])
    return grid[best]


def with_seed(hp: GbdtHyperparams, seed: int) -> GbdtHyperparams:
    return replace(hp, seed=seed)
