"""Shared fixtures."""

from typing import Dict, List

import pytest

from sscaudit.core.item import EvaluationItem
from sscaudit.taskgen.generators import generate
from sscaudit.taskgen.spec import GeneratorSpec, TaskKind
from sscaudit.translator.render import translate_item


def make_items(task: str, n: int, seed: int = 0, translate: bool = True) -> List[EvaluationItem]:
    items = generate(GeneratorSpec(TaskKind(task), n, seed))
    if translate:
        items = [translate_item(item) for item in items]
    return items


def by_id(items: List[EvaluationItem]) -> Dict[str, EvaluationItem]:
    return {item.id: item for item in items}


@pytest.fixture(scope="session")
def barmax_items() -> List[EvaluationItem]:
    """Forty translated barmax items."""
    return make_items("barmax", 40, seed=3)


@pytest.fixture(scope="session")
def candle_items() -> List[EvaluationItem]:
    return make_items("candlestick", 20, seed=5)


@pytest.fixture(scope="session")
def arith_items() -> List[EvaluationItem]:
    return make_items("textarith", 20, seed=11)
