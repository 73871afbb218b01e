"""Exact solvers that answer an item from its prompt bundle alone.

The oracle certifies semantic sufficiency: a condition is sufficient for an
item when the solver can recover the answer from what that condition shows
the model. Geometry recorded by the generator is treated as public
documentation, not as a hidden answer.
"""

import logging
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from ..core.bundle import PromptBundle, make_prompt_bundle
from ..core.condition import Condition
from ..core.errors import DataValidationError, UnknownTaskKind
from ..core.item import DELIMITER_LINE, EvaluationItem
from ..translator.render import decode_padded_text, render_config_of, split_symv
from .charts import BarGeometry, CandleGeometry, read_barchart, read_candlestick
from .generators import ARITH_QUESTION, BAR_QUESTION, CANDLE_HEADER, CANDLE_QUESTION
from .spec import TaskKind

logger = logging.getLogger(__name__)

_BAR_FACT = re.compile(r"([A-Z])=(\d+)")
_ARITH_FACTS = re.compile(r"^a=(-?\d+), b=(-?\d+)$")


@dataclass(frozen=True)
class Insufficient:
    """The bundle provably lacks a fact the answer depends on."""

    reason: str

    def __str__(self) -> str:
        return f"Insufficient({self.reason})"


OracleAnswer = Union[str, Insufficient]
Scene = Union[str, np.ndarray]


def _unpad(pane: np.ndarray, width: int) -> np.ndarray:
    left = (pane.shape[1] - width) // 2
    return pane[:, left : left + width]


def _question_and_scene(
    bundle: PromptBundle, item: EvaluationItem
) -> Tuple[str, Optional[Scene]]:
    """Split a bundle into its question and its scene (symbolic text, pixels or None)."""
    if bundle.condition == Condition.SYMT:
        question, sep, label = bundle.text.partition(f"\n{DELIMITER_LINE}\n")
        return question, (label if sep else None)
    if bundle.condition == Condition.FULL:
        return bundle.text, bundle.images[0].pixels
    if bundle.condition == Condition.SYMV:
        top, bottom = split_symv(bundle.images[0])
        return decode_padded_text(top, render_config_of(item)), bottom
    return bundle.text, None


# Candlestick


def _candle_rule(series: List[Tuple[int, int, int, int]]) -> str:
    last_close = series[-1][3]
    prior_high = max(high for _, high, _, _ in series[:-1])
    return "yes" if last_close > prior_high else "no"


def _parse_candle_table(label: str) -> List[Tuple[int, int, int, int]]:
    lines = label.splitlines()
    if not lines or lines[0] != CANDLE_HEADER:
        raise DataValidationError("candle table header missing")
    series = []
    for line in lines[1:]:
        fields = [int(v) for v in line.split(",")]
        if len(fields) != 5:
            raise DataValidationError(f"malformed candle row '{line}'")
        series.append((fields[1], fields[2], fields[3], fields[4]))
    return series


def _solve_candlestick(question: str, scene: Scene, item: EvaluationItem) -> OracleAnswer:
    if question != CANDLE_QUESTION:
        return Insufficient("question not recognized")
    if isinstance(scene, str):
        return _candle_rule(_parse_candle_table(scene))
    geometry = CandleGeometry.from_dict(item.meta["geometry"])
    pixels = _unpad(np.asarray(scene), geometry.width)
    return _candle_rule(read_candlestick(pixels, geometry))


# Bar chart


def _tallest(bars: List[Tuple[str, int]]) -> str:
    return max(bars, key=lambda bar: bar[1])[0]


def _solve_barmax(question: str, scene: Scene, item: EvaluationItem) -> OracleAnswer:
    if question != BAR_QUESTION:
        return Insufficient("question not recognized")
    if isinstance(scene, str):
        bars = [(letter, int(h)) for letter, h in _BAR_FACT.findall(scene)]
        if not bars:
            raise DataValidationError("no bar heights in scene text")
        return _tallest(bars)
    geometry = BarGeometry.from_dict(item.meta["geometry"])
    pixels = _unpad(np.asarray(scene), geometry.width)
    return _tallest(read_barchart(pixels, geometry))


# Text arithmetic


def _solve_textarith(question: str, scene: Scene, item: EvaluationItem) -> OracleAnswer:
    if question != ARITH_QUESTION:
        return Insufficient("question not recognized")
    if isinstance(scene, str):
        facts = scene
    else:
        facts = decode_padded_text(np.asarray(scene), render_config_of(item, "scene_render"))
    match = _ARITH_FACTS.match(facts)
    if not match:
        raise DataValidationError(f"unrecognized operands '{facts}'")
    return str(int(match.group(1)) + int(match.group(2)))


_SOLVERS: Dict[str, Callable[[str, Scene, EvaluationItem], OracleAnswer]] = {
    TaskKind.CANDLESTICK.value: _solve_candlestick,
    TaskKind.BARMAX.value: _solve_barmax,
    TaskKind.TEXTARITH.value: _solve_textarith,
}


def oracle_solve(item: EvaluationItem, condition: Condition) -> OracleAnswer:
    """
    Answer an item using only the information in its prompt bundle.

    Args:
        item: Item from a built-in generator
        condition: Condition whose bundle is examined

    Returns:
        The answer string, or Insufficient when the bundle lacks required facts

    Raises:
        UnknownTaskKind: No solver for the item's task kind
    """
    solver = _SOLVERS.get(item.task_kind)
    if solver is None:
        raise UnknownTaskKind(f"No oracle for task kind '{item.task_kind}'")

    bundle = make_prompt_bundle(item, condition)
    question, scene = _question_and_scene(bundle, item)
    if scene is None:
        return Insufficient(f"no scene facts under {condition.value}")
    return solver(question, scene, item)
