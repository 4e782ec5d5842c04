"""Deterministic fan-out over independent work items."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> list[R]:
    """Map fn over items, optionally on a thread pool; output order is input order."""
    seq: Sequence[T] = list(items)
    if jobs <= 1 or len(seq) <= 1:
        return [fn(x) for x in seq]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, seq))
