"""Worker-count plumbing shared by the certifier and the hunter.

Parallelism is bounded by the SEPCERT_THREADS environment variable; the
default is serial execution.  Every parallel site in this package reduces
its results in a fixed order, so the outcome never depends on the schedule.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count(default: int = 1) -> int:
    raw = os.environ.get("SEPCERT_THREADS")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return max(1, value)


def map_ordered(fn, items, workers: int | None = None) -> list:
    """Apply ``fn`` to each item, preserving input order in the result list."""
    items = list(items)
    if workers is None:
        workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
