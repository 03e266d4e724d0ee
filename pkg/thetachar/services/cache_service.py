"""
In-process cache for theta and eta expansions.

Expansions are pure functions of (kind, u, argument, tau-shift, depth,
grading), so they are memoized here. The cache is shared by every caller in
the process and guarded by a lock; entries are evicted least recently used
first once ``max_entries`` is reached.
"""

import threading
from collections import OrderedDict
from typing import Any, Hashable, Optional

import structlog

from thetachar.core.config import settings

logger = structlog.get_logger(__name__)


class ExpansionCache:
    """
    Thread-safe LRU memo of series expansions.
    """

    def __init__(self, max_entries: int = 4096):
        self._store: "OrderedDict[Hashable, Any]" = OrderedDict()
        self._lock = threading.Lock()
        self.max_entries = max_entries
        self.hits = 0
        self.misses = 0

    def get(self, key: Hashable) -> Optional[Any]:
        """
        Get a cached value.

        Args:
            key: Cache key

        Returns:
            Cached value or None
        """
        with self._lock:
            if key in self._store:
                self._store.move_to_end(key)
                self.hits += 1
                return self._store[key]
            self.misses += 1
            return None

    def set(self, key: Hashable, value: Any) -> None:
        with self._lock:
            self._store[key] = value
            self._store.move_to_end(key)
            while len(self._store) > self.max_entries:
                evicted, _ = self._store.popitem(last=False)
                logger.debug("Evicted expansion", key=repr(evicted)[:120])

    def exists(self, key: Hashable) -> bool:
        with self._lock:
            return key in self._store

    def delete(self, key: Hashable) -> bool:
        with self._lock:
            return self._store.pop(key, None) is not None

    def clear(self) -> None:
        with self._lock:
            self._store.clear()
            self.hits = 0
            self.misses = 0

    def stats(self) -> dict:
        with self._lock:
            return {"entries": len(self._store), "hits": self.hits, "misses": self.misses}


# Global cache instance
expansion_cache = ExpansionCache(settings.EXPANSION_CACHE_SIZE)
