"""Chart rendering with documented geometry, and exact pixel readers for it.

Every chart has a 1 px black frame on its outer edge so it can be located
inside a padded composite. No chart uses gray level 128 (the SymV separator).
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..core.errors import DataValidationError
from ..core.raster import Raster
from ..translator.font import GLYPH_HEIGHT, GLYPH_WIDTH, draw_glyph, read_glyph

BACKGROUND = 255
FRAME = 0
WICK = 0
BULLISH = 96
BEARISH = 0
BAR = 64
LABEL = 0

OHLC = Tuple[int, int, int, int]


@dataclass(frozen=True)
class CandleGeometry:
    """
    Pixel layout of a candlestick chart.

    Price p maps to row 1 + margin + (price_top - p) * px_per_unit. Candle i
    spans columns x_left(i) .. x_left(i) + candle_width - 1; its wick is the
    center column.
    """

    candles: int
    price_top: int
    price_bottom: int
    px_per_unit: int = 2
    candle_width: int = 5
    candle_gap: int = 3
    margin: int = 4

    def __post_init__(self) -> None:
        if self.candle_width < 3 or self.candle_width % 2 == 0:
            raise ValueError("candle_width must be odd and at least 3")
        if self.price_bottom > self.price_top:
            raise ValueError("price_bottom cannot exceed price_top")

    @property
    def width(self) -> int:
        body = self.candles * self.candle_width + (self.candles - 1) * self.candle_gap
        return 2 + 2 * self.margin + body

    @property
    def height(self) -> int:
        return 2 + 2 * self.margin + (self.price_top - self.price_bottom) * self.px_per_unit + 1

    def y(self, price: int) -> int:
        return 1 + self.margin + (self.price_top - price) * self.px_per_unit

    def price(self, row: int) -> int:
        offset = row - 1 - self.margin
        if offset % self.px_per_unit:
            raise DataValidationError(f"row {row} is not on the price grid")
        return self.price_top - offset // self.px_per_unit

    def x_left(self, index: int) -> int:
        return 1 + self.margin + index * (self.candle_width + self.candle_gap)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CandleGeometry":
        return cls(**data)


@dataclass(frozen=True)
class BarGeometry:
    """
    Pixel layout of a labeled bar chart.

    Bars stand on the baseline row 1 + margin + max_height * unit_px; each
    unit of height is unit_px rows. Letters sit label_gap rows under the
    baseline, centered under their bar.
    """

    bars: int
    max_height: int
    unit_px: int = 4
    bar_width: int = 12
    bar_gap: int = 8
    margin: int = 6
    label_gap: int = 3

    @property
    def baseline(self) -> int:
        return 1 + self.margin + self.max_height * self.unit_px

    @property
    def width(self) -> int:
        return 2 + 2 * self.margin + self.bars * self.bar_width + (self.bars - 1) * self.bar_gap

    @property
    def height(self) -> int:
        return self.baseline + self.label_gap + GLYPH_HEIGHT + self.margin + 1

    def x_left(self, index: int) -> int:
        return 1 + self.margin + index * (self.bar_width + self.bar_gap)

    def label_x(self, index: int) -> int:
        return self.x_left(index) + (self.bar_width - GLYPH_WIDTH) // 2

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BarGeometry":
        return cls(**data)


def bar_letter(index: int) -> str:
    return chr(ord("A") + index)


def _framed_canvas(height: int, width: int) -> np.ndarray:
    canvas = np.full((height, width), BACKGROUND, dtype=np.uint8)
    canvas[0, :] = canvas[-1, :] = FRAME
    canvas[:, 0] = canvas[:, -1] = FRAME
    return canvas


def _check_frame(pixels: np.ndarray, height: int, width: int) -> None:
    if pixels.shape != (height, width):
        raise DataValidationError(
            f"chart is {pixels.shape[1]}x{pixels.shape[0]}, geometry expects {width}x{height}"
        )
    edges = np.concatenate([pixels[0, :], pixels[-1, :], pixels[:, 0], pixels[:, -1]])
    if np.any(edges != FRAME):
        raise DataValidationError("chart frame is broken")


def render_candlestick(ohlc: Sequence[OHLC], geometry: CandleGeometry) -> Raster:
    """Draw candles: wick in the center column, body over it (bullish 96, bearish 0)."""
    canvas = _framed_canvas(geometry.height, geometry.width)
    half = geometry.candle_width // 2
    for i, (open_, high, low, close) in enumerate(ohlc):
        left = geometry.x_left(i)
        center = left + half
        canvas[geometry.y(high) : geometry.y(low) + 1, center] = WICK
        top, bottom = geometry.y(max(open_, close)), geometry.y(min(open_, close))
        color = BULLISH if close >= open_ else BEARISH
        canvas[top : bottom + 1, left : left + geometry.candle_width] = color
    return Raster(canvas)


def read_candlestick(pixels: np.ndarray, geometry: CandleGeometry) -> List[OHLC]:
    """
    Recover the exact OHLC series from a chart drawn by render_candlestick.

    Raises:
        DataValidationError: The pixels do not match the geometry
    """
    _check_frame(pixels, geometry.height, geometry.width)
    half = geometry.candle_width // 2
    series: List[OHLC] = []
    for i in range(geometry.candles):
        left = geometry.x_left(i)
        wick_rows = np.flatnonzero(pixels[:, left + half][1:-1] != BACKGROUND) + 1
        body_rows = np.flatnonzero(pixels[:, left][1:-1] != BACKGROUND) + 1
        if wick_rows.size == 0 or body_rows.size == 0:
            raise DataValidationError(f"candle {i} not found")
        high, low = geometry.price(int(wick_rows[0])), geometry.price(int(wick_rows[-1]))
        upper, lower = geometry.price(int(body_rows[0])), geometry.price(int(body_rows[-1]))
        color = int(pixels[body_rows[0], left])
        if color == BULLISH:
            series.append((lower, high, low, upper))
        elif color == BEARISH:
            series.append((upper, high, low, lower))
        else:
            raise DataValidationError(f"candle {i} has body color {color}")
    return series


def render_barchart(heights: Sequence[int], geometry: BarGeometry) -> Raster:
    """Draw bars bottom-aligned on the baseline with their letters underneath."""
    canvas = _framed_canvas(geometry.height, geometry.width)
    for i, h in enumerate(heights):
        left = geometry.x_left(i)
        top = geometry.baseline - h * geometry.unit_px
        canvas[top : geometry.baseline, left : left + geometry.bar_width] = BAR
        label_y = geometry.baseline + geometry.label_gap
        draw_glyph(canvas, bar_letter(i), geometry.label_x(i), label_y, 1, LABEL)
    return Raster(canvas)


def read_barchart(pixels: np.ndarray, geometry: BarGeometry) -> List[Tuple[str, int]]:
    """
    Recover (letter, height) for every bar.

    Raises:
        DataValidationError: The pixels do not match the geometry
    """
    _check_frame(pixels, geometry.height, geometry.width)
    bars: List[Tuple[str, int]] = []
    for i in range(geometry.bars):
        column = pixels[1 : geometry.baseline, geometry.x_left(i) + geometry.bar_width // 2]
        filled = int(np.count_nonzero(column == BAR))
        if filled % geometry.unit_px:
            raise DataValidationError(f"bar {i} height is off the unit grid")
        letter = read_glyph(
            pixels,
            geometry.label_x(i),
            geometry.baseline + geometry.label_gap,
            1,
            LABEL,
            BACKGROUND,
        )
        if letter is None:
            raise DataValidationError(f"bar {i} label is unreadable")
        bars.append((letter, filled // geometry.unit_px))
    return bars
