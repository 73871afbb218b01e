"""Transcripts: one model response to one (item, condition)."""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from .condition import Condition
from .errors import DataValidationError, UsageError


@dataclass(frozen=True)
class Transcript:
    """
    Record of a single model call.

    Attributes:
        item_id: ID of the evaluated item
        condition: Condition the item was presented under
        model_id: Model that answered
        raw_text: Model output as returned
        latency_ms: Wall-clock latency (0 for cache hits and pure back-ends)
        attempt_count: Network attempts made (0 on cache hit)
        cache_hit: Whether the response came from the response cache
        extracted: Canonical answer extracted from raw_text
        score: 1 if extracted matches gold, else 0
        answered: False when the back-end failed permanently
        error: Failure message for unanswered pairs
    """

    item_id: str
    condition: Condition
    model_id: str
    raw_text: str = ""
    latency_ms: float = 0.0
    attempt_count: int = 0
    cache_hit: bool = False
    extracted: str = ""
    score: int = 0
    answered: bool = True
    error: Optional[str] = None

    @property
    def sort_key(self) -> tuple:
        return (self.item_id, self.condition.order, self.model_id)

    def to_dict(self) -> Dict[str, Any]:
        """Convert transcript to dictionary."""
        return {
            "item_id": self.item_id,
            "condition": self.condition.value,
            "model_id": self.model_id,
            "raw_text": self.raw_text,
            "latency_ms": self.latency_ms,
            "attempt_count": self.attempt_count,
            "cache_hit": self.cache_hit,
            "extracted": self.extracted,
            "score": self.score,
            "answered": self.answered,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Transcript":
        """Create transcript from dictionary."""
        return cls(
            item_id=data["item_id"],
            condition=Condition.parse(data["condition"]),
            model_id=data["model_id"],
            raw_text=data.get("raw_text", ""),
            latency_ms=float(data.get("latency_ms", 0.0)),
            attempt_count=int(data.get("attempt_count", 0)),
            cache_hit=bool(data.get("cache_hit", False)),
            extracted=data.get("extracted", ""),
            score=int(data.get("score", 0)),
            answered=bool(data.get("answered", True)),
            error=data.get("error"),
        )


def write_transcripts(transcripts: Iterable[Transcript], path: Union[str, Path]) -> Path:
    """Write transcripts as JSONL, sorted by (item_id, condition)."""
    ordered = sorted(transcripts, key=lambda t: t.sort_key)
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8") as f:
        for transcript in ordered:
            f.write(json.dumps(transcript.to_dict(), ensure_ascii=True, separators=(",", ":")))
            f.write("\n")
    return target


def read_transcripts(path: Union[str, Path]) -> List[Transcript]:
    """Read a transcripts JSONL file."""
    source = Path(path)
    if not source.exists():
        raise DataValidationError(f"Transcript file not found: {source}")

    transcripts: List[Transcript] = []
    with open(source, "r", encoding="utf-8") as f:
        for line_num, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                transcripts.append(Transcript.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError, UsageError) as e:
                raise DataValidationError(f"{source}:{line_num}: {e}") from e
    return transcripts
