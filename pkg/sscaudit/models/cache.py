"""Content-addressed response cache, one JSON file per request."""

import json
import logging
import os
import threading
from hashlib import sha256
from pathlib import Path
from typing import Any, Dict, Optional, Union

logger = logging.getLogger(__name__)


class ResponseCache:
    """
    Persistent cache of raw model responses.

    Keys are SHA-256 digests over (model_id, condition, canonical request bytes),
    so identical requests across runs resolve to the same file. Writes go to a
    temporary file that is then renamed over the target.
    """

    def __init__(self, cache_dir: Union[str, Path]):
        """
        Initialize cache.

        Args:
            cache_dir: Directory holding <key>.json files (created on first write)
        """
        self.cache_dir = Path(cache_dir)
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()

    @staticmethod
    def make_key(model_id: str, condition: str, request_bytes: bytes) -> str:
        """Build the cache key for one request."""
        digest = sha256()
        digest.update(model_id.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(condition.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(request_bytes)
        return digest.hexdigest()

    def _path(self, key: str) -> Path:
        return self.cache_dir / f"{key}.json"

    def get(self, key: str) -> Optional[Dict[str, Any]]:
        """Return the cached entry for key, updating hit/miss counters."""
        path = self._path(key)
        entry: Optional[Dict[str, Any]] = None
        if path.exists():
            try:
                with open(path, "r", encoding="utf-8") as f:
                    entry = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                logger.warning(f"Ignoring unreadable cache entry {path.name}: {e}")
        with self._lock:
            if entry is None:
                self.misses += 1
            else:
                self.hits += 1
        return entry

    def set(self, key: str, entry: Dict[str, Any]) -> None:
        """Store an entry atomically."""
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        path = self._path(key)
        tmp = path.with_name(f".{path.name}.{os.getpid()}.{threading.get_ident()}.tmp")
        with open(tmp, "w", encoding="utf-8") as f:
            json.dump(entry, f, ensure_ascii=True, sort_keys=True)
        os.replace(tmp, path)

    def hit_rate(self) -> float:
        total = self.hits + self.misses
        if total == 0:
            return 0.0
        return self.hits / float(total)
