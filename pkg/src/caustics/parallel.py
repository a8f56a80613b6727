"""Order-preserving map over a process pool.

Work functions are pure, so the result never depends on ``workers``; the pool
only changes scheduling.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def pmap(fn, items, workers=1):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items, chunksize=chunk))
