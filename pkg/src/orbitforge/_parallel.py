"""Deterministic thread-pool map honouring ``ORBITFORGE_THREADS``."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    raw = os.environ.get("ORBITFORGE_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, min(n, 32))


def pmap(fn, items, min_items: int = 8) -> list:
    """``[fn(x) for x in items]`` with results in input order."""
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) < min_items:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
