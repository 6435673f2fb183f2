from cachetools import LRUCache
from typing import Any, Callable, Optional
import threading
import hashlib
import logging

import numpy as np

logger = logging.getLogger(__name__)


class FactorizationCache:
    """Thread-safe cache for Cholesky factors of Gram matrices"""

    def __init__(self, maxsize: int = 32):
        """
        Initialize the cache

        Args:
            maxsize: Maximum number of factorizations kept
        """
        self._cache = LRUCache(maxsize=maxsize)
        self._lock = threading.Lock()

    def matrix_key(self, kind: str, matrix: np.ndarray) -> str:
        """Generate a cache key from the matrix contents"""
        digest = hashlib.md5()
        digest.update(kind.encode())
        digest.update(repr(matrix.shape).encode())
        digest.update(np.ascontiguousarray(matrix, dtype=np.float64).tobytes())
        return digest.hexdigest()

    def get(self, key: str) -> Optional[Any]:
        """Get an item from cache"""
        with self._lock:
            value = self._cache.get(key)
            if value is not None:
                logger.debug(f"Cache hit for key: {key}")
            else:
                logger.debug(f"Cache miss for key: {key}")
            return value

    def set(self, key: str, value: Any) -> None:
        """Set an item in cache"""
        with self._lock:
            self._cache[key] = value
            logger.debug(f"Cached factorization for key: {key}")

    def get_or_compute(self, key: str, compute: Callable[[], Any]) -> Any:
        value = self.get(key)
        if value is None:
            value = compute()
            self.set(key, value)
        return value

    def clear(self) -> None:
        """Clear all items from cache"""
        with self._lock:
            self._cache.clear()
            logger.info("Factorization cache cleared")

    def size(self) -> int:
        """Get current cache size"""
        with self._lock:
            return len(self._cache)


# Global cache instance
_cache_instance = None
_cache_lock = threading.Lock()


def get_cache(maxsize: int = 32) -> FactorizationCache:
    """Get or create the global cache instance"""
    global _cache_instance
    with _cache_lock:
        if _cache_instance is None:
            _cache_instance = FactorizationCache(maxsize=maxsize)
        return _cache_instance
