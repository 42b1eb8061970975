"""Order-preserving parallel map, bounded by EPSILON_KERNEL_THREADS."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "EPSILON_KERNEL_THREADS"


def worker_count() -> int:
    """Workers allowed by the environment; 1 (sequential) when unset or invalid."""
    raw = os.environ.get(ENV_VAR, "").strip()
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, min(n, os.cpu_count() or 1))


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """``[fn(x) for x in items]``, possibly in worker processes.

    Results come back in input order whatever the scheduling, so reports
    built from them do not depend on the worker count.
    """
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
