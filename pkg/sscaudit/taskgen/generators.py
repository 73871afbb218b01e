"""Deterministic generators of isomorphic (V, V_label, T) items."""

import logging
from typing import Callable, Dict, List, Optional

import numpy as np

from ..core.errors import Exhausted
from ..core.item import EvaluationItem
from ..translator.render import RenderConfig, render_text_image
from .charts import BarGeometry, CandleGeometry, bar_letter, render_barchart, render_candlestick
from .spec import GeneratorSpec, TaskKind

logger = logging.getLogger(__name__)

CANDLE_QUESTION = (
    "Does the close of the last candle exceed the maximum high of all earlier candles? "
    "Answer yes or no."
)
BAR_QUESTION = "Which bar is the tallest? Answer with its letter."
ARITH_QUESTION = "Compute a+b. Answer with the integer."

CANDLE_HEADER = "idx,open,high,low,close"

# Decision-relevant quantities must differ by at least this many units.
SAFETY_MARGIN = 2
MAX_RESAMPLES = 1000


def item_seed(seed: int, index: int) -> int:
    """Independent 64-bit seed of item `index` in a dataset seeded with `seed`."""
    state = np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(1, dtype=np.uint64)
    return int(state[0])


def item_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def glyph_count(text: str) -> int:
    """Number of inked glyphs (non-space characters) in text."""
    return sum(1 for ch in text if not ch.isspace())


def candle_table(ohlc: List[tuple]) -> str:
    rows = [CANDLE_HEADER] + [f"{i},{o},{h},{lo},{c}" for i, (o, h, lo, c) in enumerate(ohlc)]
    return "\n".join(rows)


def _sample_walk(rng: np.random.Generator, params: Dict[str, int], want_yes: bool) -> List[tuple]:
    k, base = params["k"], params["base"]
    max_step, wick_max = params["max_step"], params["wick_max"]
    for _ in range(MAX_RESAMPLES):
        closes = base + np.cumsum(rng.integers(-max_step, max_step + 1, size=k))
        opens = np.concatenate([[base], closes[:-1]])
        highs = np.maximum(opens, closes) + rng.integers(0, wick_max + 1, size=k)
        lows = np.minimum(opens, closes) - rng.integers(0, wick_max + 1, size=k)
        gap = int(closes[-1]) - int(highs[:-1].max())
        if abs(gap) < SAFETY_MARGIN or (gap > 0) != want_yes:
            continue
        return [
            (int(o), int(h), int(lo), int(c)) for o, h, lo, c in zip(opens, highs, lows, closes)
        ]
    raise Exhausted(
        f"candlestick: no walk with a {SAFETY_MARGIN}-unit breakout margin in "
        f"{MAX_RESAMPLES} tries (params {params})"
    )


def gen_candlestick(spec: GeneratorSpec) -> List[EvaluationItem]:
    """
    Candlestick breakout items.

    The series is a seeded integer random walk; yes and no answers are balanced
    by a seeded coin per item.

    Raises:
        Exhausted: No walk met the breakout margin within the resample budget
    """
    items = []
    for i in range(spec.n):
        seed = item_seed(spec.seed, i)
        rng = item_rng(seed)
        want_yes = bool(rng.random() < 0.5)
        ohlc = _sample_walk(rng, spec.params, want_yes)

        geometry = CandleGeometry(
            candles=len(ohlc),
            price_top=max(h for _, h, _, _ in ohlc),
            price_bottom=min(lo for _, _, lo, _ in ohlc),
        )
        items.append(
            EvaluationItem(
                id=spec.item_id(i),
                task_kind=TaskKind.CANDLESTICK.value,
                t=CANDLE_QUESTION,
                gold="yes" if want_yes else "no",
                v=render_candlestick(ohlc, geometry),
                v_label=candle_table(ohlc),
                choices=["yes", "no"],
                seed=seed,
                meta={
                    "params": dict(spec.params),
                    "geometry": geometry.to_dict(),
                    "critical_features": len(ohlc),
                    "question_glyphs": glyph_count(CANDLE_QUESTION),
                },
            )
        )
    return items


def gen_barmax(spec: GeneratorSpec) -> List[EvaluationItem]:
    """
    Tallest-bar items with distinct heights.

    The tallest bar exceeds the runner-up by at least two units.

    Raises:
        Exhausted: No height set met the margin within the resample budget
    """
    bars, max_height = spec.params["bars"], spec.params["max_height"]
    letters = [bar_letter(j) for j in range(bars)]
    geometry = BarGeometry(bars=bars, max_height=max_height)

    items = []
    for i in range(spec.n):
        seed = item_seed(spec.seed, i)
        rng = item_rng(seed)
        for _ in range(MAX_RESAMPLES):
            heights = rng.choice(np.arange(1, max_height + 1), size=bars, replace=False)
            top, runner_up = np.sort(heights)[::-1][:2]
            if top - runner_up >= SAFETY_MARGIN:
                break
        else:
            raise Exhausted(
                f"barmax: no heights with a {SAFETY_MARGIN}-unit lead in {MAX_RESAMPLES} tries "
                f"(params {spec.params})"
            )

        heights_list = [int(h) for h in heights]
        v_label = "heights: " + ", ".join(
            f"{letter}={h}" for letter, h in zip(letters, heights_list)
        )
        items.append(
            EvaluationItem(
                id=spec.item_id(i),
                task_kind=TaskKind.BARMAX.value,
                t=BAR_QUESTION,
                gold=letters[int(np.argmax(heights))],
                v=render_barchart(heights_list, geometry),
                v_label=v_label,
                choices=list(letters),
                seed=seed,
                meta={
                    "params": dict(spec.params),
                    "geometry": geometry.to_dict(),
                    "critical_features": 2 * bars,
                    "question_glyphs": glyph_count(BAR_QUESTION),
                },
            )
        )
    return items


def gen_textarith(
    spec: GeneratorSpec, scene_cfg: Optional[RenderConfig] = None
) -> List[EvaluationItem]:
    """Addition items whose operands exist only in the scene (rendered text)."""
    scene_cfg = scene_cfg or RenderConfig()
    lo, hi = spec.params["lo"], spec.params["hi"]

    items = []
    for i in range(spec.n):
        seed = item_seed(spec.seed, i)
        rng = item_rng(seed)
        x, y = (int(v) for v in rng.integers(lo, hi + 1, size=2))
        v_label = f"a={x}, b={y}"
        items.append(
            EvaluationItem(
                id=spec.item_id(i),
                task_kind=TaskKind.TEXTARITH.value,
                t=ARITH_QUESTION,
                gold=str(x + y),
                v=render_text_image(v_label, scene_cfg),
                v_label=v_label,
                seed=seed,
                meta={
                    "params": dict(spec.params),
                    "scene_render": scene_cfg.model_dump(),
                    "critical_features": glyph_count(v_label),
                    "question_glyphs": glyph_count(ARITH_QUESTION),
                },
            )
        )
    return items


GENERATORS: Dict[TaskKind, Callable[[GeneratorSpec], List[EvaluationItem]]] = {
    TaskKind.CANDLESTICK: gen_candlestick,
    TaskKind.BARMAX: gen_barmax,
    TaskKind.TEXTARITH: gen_textarith,
}


def generate(spec: GeneratorSpec) -> List[EvaluationItem]:
    """Run the generator named by spec.task_kind."""
    items = GENERATORS[spec.task_kind](spec)
    logger.info(f"Generated {len(items)} {spec.task_kind.value} items (seed={spec.seed})")
    return items
