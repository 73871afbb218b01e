"""Modality conditions under test."""

from enum import Enum
from typing import List, Tuple

from .errors import UsageError


class Condition(str, Enum):
    """Which modality modulation of an item is presented to the model."""

    FULL = "full"  # scene image + question text
    SYMT = "symt"  # question text + symbolic scene text, no image
    SYMV = "symv"  # question rendered into the scene image, no text
    TEXT_ONLY = "textonly"  # question text only (ablation, S_wv)
    BASE_TEXT = "basetext"  # question text only, against the base LLM (S_t)

    @classmethod
    def parse(cls, name: str) -> "Condition":
        """Parse a condition name, case-insensitively."""
        key = name.strip().lower()
        for condition in cls:
            if condition.value == key:
                return condition
        valid = ", ".join(c.value for c in cls)
        raise UsageError(f"Unknown condition '{name}' (expected one of: {valid})")

    @classmethod
    def parse_list(cls, names: str) -> List["Condition"]:
        """Parse a comma-separated list, dropping duplicates but keeping order."""
        parsed: List[Condition] = []
        for part in names.split(","):
            if not part.strip():
                continue
            condition = cls.parse(part)
            if condition not in parsed:
                parsed.append(condition)
        if not parsed:
            raise UsageError("At least one condition is required")
        return parsed

    @property
    def order(self) -> int:
        """Position in the canonical output order."""
        return list(Condition).index(self)

    @property
    def uses_images(self) -> bool:
        return self in (Condition.FULL, Condition.SYMV)


PROTOCOL_CONDITIONS: Tuple[Condition, ...] = (Condition.FULL, Condition.SYMT, Condition.SYMV)
