"""Exact-match answer extraction."""

import re
from typing import List, Optional

from ..core.item import EvaluationItem

LEAD_INS = ("final answer:", "the answer is", "answer is", "answer:")

_TERMINAL_PUNCT = ".,!?;:"
_LEADING_LETTER = re.compile(r"^([a-z])(?:[).:]|$)")
_INTEGER = re.compile(r"-?\d+")


def normalize(text: str) -> str:
    """Trim, lowercase, drop a lead-in phrase, strip terminal punctuation."""
    s = text.strip().lower()
    stripped = True
    while stripped:
        stripped = False
        for lead in LEAD_INS:
            if s.startswith(lead):
                s = s[len(lead) :].strip()
                stripped = True
    return s.rstrip(_TERMINAL_PUNCT + " \t\r\n").strip()


def extract_from_choices(normalized: str, choices: List[str]) -> str:
    canonical = [normalize(c) for c in choices]
    if normalized in canonical:
        return normalized
    match = _LEADING_LETTER.match(normalized)
    if match:
        index = ord(match.group(1)) - ord("a")
        if index < len(canonical):
            return canonical[index]
    return ""


def extract_integer(normalized: str) -> str:
    match = _INTEGER.search(normalized)
    return str(int(match.group(0))) if match else ""


def extract_answer(raw_text: str, item: Optional[EvaluationItem] = None) -> str:
    """
    Canonical answer from a raw model response.

    With choices, accepts the exact choice string or a standalone leading
    choice letter followed by ")", ".", ":" or the end. Without choices, the
    first decimal integer. Returns "" when nothing matches.

    Args:
        raw_text: Model output
        item: Item the answer belongs to (choices decide the rule)

    Returns:
        Canonical answer, or "" on no match
    """
    normalized = normalize(raw_text)
    if item is not None and item.choices:
        return extract_from_choices(normalized, item.choices)
    return extract_integer(normalized)


def canonical_gold(item: EvaluationItem) -> str:
    return extract_answer(item.gold, item)


def score_item(canonical: str, gold: str) -> int:
    """1 iff the canonical answer equals the canonical gold; an empty answer never scores."""
    return int(bool(canonical) and canonical == gold)
