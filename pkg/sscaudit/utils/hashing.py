"""Stable hashing helpers for seeds and dataset identity."""

import hashlib
from typing import Iterable

from ..core.item import EvaluationItem


def stable_seed(*parts: object) -> int:
    """63-bit seed derived from the string forms of parts."""
    digest = hashlib.sha256(":".join(str(p) for p in parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def items_digest(items: Iterable[EvaluationItem]) -> str:
    """SHA-256 over item ids, golds and image digests, in id order."""
    h = hashlib.sha256()
    for item in sorted(items, key=lambda i: i.id):
        h.update(item.id.encode("utf-8"))
        h.update(b"\0")
        h.update(item.gold.encode("utf-8"))
        for raster in (item.v, item.symv_composite):
            h.update(b"\0")
            if raster is not None:
                h.update(raster.digest().encode("ascii"))
        h.update(b"\n")
    return h.hexdigest()
