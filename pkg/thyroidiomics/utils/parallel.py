"""
Worker-pool helpers

Results always come back in input order, so anything reduced from them is
independent of the worker count and of completion order.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def default_workers() -> int:
    """Available parallelism (at least 1)"""
    if hasattr(os, "sched_getaffinity"):
        return max(1, len(os.sched_getaffinity(0)))
    return max(1, os.cpu_count() or 1)


def ordered_map(
    func: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None
) -> List[R]:
    """
    Apply ``func`` to every item, possibly in worker processes

    Args:
        func: Module-level (picklable) function
        items: Inputs
        workers: Process count; ``None`` or ``1`` runs serially in-process

    Returns:
        Results in the order of ``items``
    """
    items = list(items)
    if not workers or workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    max_workers = min(workers, len(items))
    chunksize = max(1, len(items) // (max_workers * 4))
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(func, items, chunksize=chunksize))
