"""Unit tests for answer extraction and scoring."""

import pytest

from sscaudit.core.item import EvaluationItem
from sscaudit.scoring.extract import canonical_gold, extract_answer, normalize, score_item


def choice_item(choices, gold):
    return EvaluationItem(id="c-1", task_kind="barmax", t="?", gold=gold, choices=choices)


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("  Yes. ", "yes"),
        ("The answer is B.", "b"),
        ("Final answer: the answer is 7!", "7"),
        ("ANSWER: no", "no"),
        ("plain", "plain"),
    ],
)
def test_normalize(raw, expected):
    """Test case folding, lead-in removal and terminal punctuation."""
    assert normalize(raw) == expected


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("The answer is B.", "b"),
        ("b", "b"),
        ("C) because it is tallest", "c"),
        ("d: clearly", "d"),
        ("E", ""),
        ("bar b", ""),
        ("", ""),
    ],
)
def test_extract_letter_choices(raw, expected):
    """Test exact choices and standalone leading letters."""
    assert extract_answer(raw, choice_item(["A", "B", "C", "D"], "B")) == expected


def test_extract_word_choices():
    """Test yes/no items match the exact normalized choice."""
    item = choice_item(["yes", "no"], "yes")

    assert extract_answer(" yes\n", item) == "yes"
    assert extract_answer("No.", item) == "no"
    assert extract_answer("a)", item) == "yes"
    assert extract_answer("maybe", item) == ""


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("a+b = 42 obviously", "42"),
        ("-3", "-3"),
        ("007", "7"),
        ("The answer is 12 or 13", "12"),
        ("no idea", ""),
    ],
)
def test_extract_integer(raw, expected):
    """Test the first decimal integer is taken for open-ended items."""
    item = EvaluationItem(id="t-1", task_kind="textarith", t="?", gold="0")
    assert extract_answer(raw, item) == expected


def test_canonical_gold():
    """Test gold answers pass through the same extraction as responses."""
    assert canonical_gold(choice_item(["A", "B"], "B")) == "b"
    assert canonical_gold(EvaluationItem(id="t", task_kind="textarith", t="?", gold="42")) == "42"


@pytest.mark.parametrize(
    "canonical,gold,score",
    [("yes", "yes", 1), ("", "yes", 0), ("b", "c", 0), ("", "", 0)],
)
def test_score_item(canonical, gold, score):
    """Test exact-match scoring; empty extractions never score."""
    assert score_item(canonical, gold) == score
