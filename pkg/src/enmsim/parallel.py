"""Optional thread parallelism for independent sweeps.

The ENM_THREADS environment variable caps the number of worker threads;
without it everything runs sequentially.  Results are always assembled in
input order, so output is deterministic regardless of scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    """Number of worker threads allowed by ENM_THREADS (default 1)."""
    raw = os.environ.get("ENM_THREADS", "")
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(1, value)


def ordered_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Map preserving input order, threaded when ENM_THREADS > 1."""
    items = list(items)
    workers = min(worker_count(), max(1, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
