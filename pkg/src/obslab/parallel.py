"""
Seeded randomness and order-preserving thread maps.

Every random stream is derived from the experiment seed and the indices of
the trial it feeds, so results do not depend on how work is scheduled.
"""

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import structlog

from obslab.settings import settings

logger = structlog.get_logger(__name__)


def trial_rng(seed: int, *indices: int) -> np.random.Generator:
    """Return the generator for the stream keyed by (seed, *indices)."""
    return np.random.default_rng(np.random.SeedSequence([seed, *indices]))


def parallel_map[T, R](fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Map fn over items with at most settings.threads workers, keeping order."""
    work = list(items)
    if settings.threads <= 1 or len(work) <= 1:
        return [fn(item) for item in work]
    with ThreadPoolExecutor(max_workers=settings.threads) as executor:
        return list(executor.map(fn, work))
