"""
Performance utilities for the exhaustive sweeps.
Provides result caching, worker-count resolution and an order-preserving parallel map.
"""

import hashlib
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from functools import wraps
from typing import Any, Callable, Iterable, List, Optional

logger = logging.getLogger(__name__)

THREADS_ENV = "HYPERREL_THREADS"


class DataCache:
    """
    Simple in-memory cache for computed traces.

    Holds at most max_entries values; set() drops expired entries first,
    then the oldest ones.
    """

    def __init__(self, ttl_seconds: int = 300, max_entries: int = 4096):
        self.cache = {}
        self.ttl = ttl_seconds
        self.max_entries = max(1, max_entries)
        self.hits = 0
        self.misses = 0

    def _generate_key(self, *args, **kwargs) -> str:
        """Generate cache key from function arguments."""
        key_data = repr(args) + repr(sorted(kwargs.items()))
        return hashlib.md5(key_data.encode()).hexdigest()

    def get(self, key: str) -> Optional[Any]:
        """Get cached value if not expired."""
        if key in self.cache:
            value, timestamp = self.cache[key]
            if time.time() - timestamp < self.ttl:
                self.hits += 1
                return value
            del self.cache[key]
        self.misses += 1
        return None

    def set(self, key: str, value: Any) -> None:
        self.cache.pop(key, None)
        if len(self.cache) >= self.max_entries:
            self._evict()
        self.cache[key] = (value, time.time())

    def _evict(self) -> None:
        now = time.time()
        expired = [k for k, (_, stamp) in self.cache.items() if now - stamp >= self.ttl]
        for k in expired:
            del self.cache[k]
        # dicts keep insertion order, so the first keys are the oldest
        while len(self.cache) >= self.max_entries:
            del self.cache[next(iter(self.cache))]

    def clear(self) -> None:
        self.cache.clear()
        self.hits = 0
        self.misses = 0


trace_cache = DataCache(ttl_seconds=600, max_entries=4096)


def cached_computation(func: Callable) -> Callable:
    """
    Decorator for caching expensive computations.

    The key is the md5 of the qualified function name and the argument reprs,
    so arguments must have a repr that identifies their value.

    Args:
        func: Function to cache

    Returns:
        Wrapped function with caching
    """

    @wraps(func)
    def wrapper(*args, **kwargs):
        cache_key = trace_cache._generate_key(func.__qualname__, *args, **kwargs)
        cached_result = trace_cache.get(cache_key)
        if cached_result is not None:
            return cached_result
        result = func(*args, **kwargs)
        trace_cache.set(cache_key, result)
        return result

    return wrapper


def resolve_thread_count(override: Optional[int] = None) -> int:
    """
    Number of worker processes for sweeps.

    Args:
        override: Explicit count from the CLI; wins over the environment

    Returns:
        Worker count >= 1 (HYPERREL_THREADS, else the CPU count)
    """
    if override is not None:
        return max(1, int(override))
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            logger.warning("ignoring non-integer %s=%r", THREADS_ENV, raw)
    return max(1, os.cpu_count() or 1)


def parallel_map(
    func: Callable,
    items: Iterable,
    workers: Optional[int] = None,
    chunksize: int = 16,
    min_parallel: int = 32,
) -> List[Any]:
    """
    Map func over items, returning results in input order.

    Args:
        func: Picklable top-level function
        items: Inputs
        workers: Worker count; resolved from the environment when None
        chunksize: Items per task sent to a worker
        min_parallel: Inputs shorter than this run serially

    Returns:
        List of results aligned with items
    """
    items = list(items)
    count = resolve_thread_count(workers)
    if count == 1 or len(items) < min_parallel:
        return [func(item) for item in items]
    logger.debug("mapping %d items over %d workers", len(items), count)
    with ProcessPoolExecutor(max_workers=count) as pool:
        return list(pool.map(func, items, chunksize=chunksize))
