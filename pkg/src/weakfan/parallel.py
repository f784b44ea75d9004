"""Order-preserving thread map capped by WEAKFAN_THREADS."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import InputShapeError


def thread_count() -> int:
    raw = os.environ.get("WEAKFAN_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise InputShapeError(f"WEAKFAN_THREADS must be a positive integer, got {raw!r}")
    return n


def pmap(fn, items) -> list:
    """list(map(fn, items)), optionally on a thread pool; results keep input order."""
    items = list(items)
    n = min(thread_count(), max(len(items), 1))
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
