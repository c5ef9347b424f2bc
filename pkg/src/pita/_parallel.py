"""Keyed parallel map with deterministic assembly."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def default_workers() -> int:
    return os.cpu_count() or 1


def keyed_map(fn, keys, workers: int = 1) -> dict:
    """Apply fn to each key; results come back keyed, never ordered by completion.

    Errors are re-raised in key order so failures are reproducible regardless
    of scheduling.
    """
    keys = list(keys)
    if workers <= 1 or len(keys) <= 1:
        return {k: fn(k) for k in keys}
    with ThreadPoolExecutor(max_workers=min(workers, len(keys))) as pool:
        futures = {k: pool.submit(fn, k) for k in keys}
        return {k: futures[k].result() for k in keys}
