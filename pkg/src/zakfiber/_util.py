"""Small shared helpers."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

T = TypeVar("T")


def fiber_map(func: Callable[[int], T], n: int, workers: int = 1) -> list[T]:
    """Apply ``func`` to fiber indices 0..n-1, preserving order.

    With workers > 1 the fibers are processed on a thread pool; each call
    is an isolated computation on fixed inputs, so results (and therefore
    any report built from them) are identical for every worker count.
    """
    if workers is None or workers <= 1 or n <= 1:
        return [func(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=int(workers)) as pool:
        return list(pool.map(func, range(n)))


def stack_generator_fibers(fibered) -> tuple[np.ndarray, np.ndarray]:
    """Validate a non-empty list of FiberedVectors on one fibration.

    Returns (stack, weights) with stack shape (n_fibers, n_points, n_gens).
    """
    if not fibered:
        raise ValueError("at least one fibered generator is required")
    first = fibered[0]
    for fv in fibered[1:]:
        if fv.fibers.shape != first.fibers.shape:
            raise ValueError("generator fiber shapes do not match")
        if not np.array_equal(fv.fiber_weights, first.fiber_weights):
            raise ValueError("generator fiber weights do not match")
    stack = np.stack([fv.fibers for fv in fibered], axis=2)
    return stack, first.fiber_weights
