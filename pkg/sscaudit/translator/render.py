"""Lossless text rendering, its exact inverse, and SymV composition."""

import logging
from dataclasses import replace
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.errors import MissingImage, UnrecognizedGlyph, UnsupportedCharacter
from ..core.item import EvaluationItem
from ..core.raster import Raster
from .font import CELL_HEIGHT, CELL_WIDTH, GLYPH_HEIGHT, GLYPH_WIDTH, downsample, draw_glyph
from .font import is_supported, lookup_bitmap

logger = logging.getLogger(__name__)

SEPARATOR_GRAY = 128
SEPARATOR_HEIGHT = 8


class RenderConfig(BaseModel):
    """Geometry and palette of rendered text."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    glyph_scale: int = Field(default=2, ge=1)
    wrap_columns: int = Field(default=48, ge=8)
    margin_px: int = Field(default=8, ge=0)
    foreground: int = Field(default=0, ge=0, le=255)
    background: int = Field(default=255, ge=0, le=255)

    @model_validator(mode="after")
    def _check_palette(self) -> "RenderConfig":
        if self.foreground == self.background:
            raise ValueError("foreground and background must differ")
        if SEPARATOR_GRAY in (self.foreground, self.background):
            raise ValueError(f"gray level {SEPARATOR_GRAY} is reserved for the SymV separator band")
        return self

    @property
    def cell_width(self) -> int:
        return CELL_WIDTH * self.glyph_scale

    @property
    def cell_height(self) -> int:
        return CELL_HEIGHT * self.glyph_scale


def check_text(text: str) -> None:
    """Raise UnsupportedCharacter for the first character outside space..tilde and newline."""
    for position, ch in enumerate(text):
        if ch != "\n" and not is_supported(ch):
            raise UnsupportedCharacter(ch, position)


def layout_rows(text: str, wrap_columns: int) -> List[str]:
    """
    Split text into visual rows.

    Lines are hard-wrapped at wrap_columns. A line whose length is a positive
    multiple of wrap_columns is followed by an empty row, so a full row always
    means "continues on the next row". Empty text has no rows.
    """
    if text == "":
        return []
    rows: List[str] = []
    for line in text.split("\n"):
        if not line:
            rows.append("")
            continue
        rows.extend(line[i : i + wrap_columns] for i in range(0, len(line), wrap_columns))
        if len(line) % wrap_columns == 0:
            rows.append("")
    return rows


def join_rows(rows: List[str], wrap_columns: int) -> str:
    """Inverse of layout_rows."""
    if not rows:
        return ""
    parts = [rows[0]]
    for previous, row in zip(rows, rows[1:]):
        if len(previous) != wrap_columns:
            parts.append("\n")
        parts.append(row)
    return "".join(parts)


def render_text_image(text: str, cfg: Optional[RenderConfig] = None) -> Raster:
    """
    Render text with the built-in 5x7 font.

    Each cell is (5+1)*scale wide and (7+1)*scale tall. Rows shorter than the
    widest row carry an end-of-row tick: one font pixel in the bottom gap strip
    of their first unused cell.

    Raises:
        UnsupportedCharacter: Text contains a character outside the font
    """
    cfg = cfg or RenderConfig()
    check_text(text)

    rows = layout_rows(text, cfg.wrap_columns)
    cols = max((len(row) for row in rows), default=0)
    s, m = cfg.glyph_scale, cfg.margin_px
    width = 2 * m + cols * cfg.cell_width
    height = 2 * m + len(rows) * cfg.cell_height

    canvas = np.full((height, width), cfg.background, dtype=np.uint8)
    for r, row in enumerate(rows):
        y = m + r * cfg.cell_height
        for c, ch in enumerate(row):
            draw_glyph(canvas, ch, m + c * cfg.cell_width, y, s, cfg.foreground)
        if len(row) < cols:
            tick_x = m + len(row) * cfg.cell_width
            tick_y = y + GLYPH_HEIGHT * s
            canvas[tick_y : tick_y + s, tick_x : tick_x + s] = cfg.foreground
    return Raster(canvas)


def _decode_pixels(pixels: np.ndarray, cfg: RenderConfig) -> Tuple[str, List[str]]:
    s, m = cfg.glyph_scale, cfg.margin_px
    height, width = pixels.shape
    inner_w, inner_h = width - 2 * m, height - 2 * m
    if inner_w < 0 or inner_h < 0 or inner_w % cfg.cell_width or inner_h % cfg.cell_height:
        raise UnrecognizedGlyph(
            f"{width}x{height} image does not fit the text grid of this render config"
        )
    n_rows, n_cols = inner_h // cfg.cell_height, inner_w // cfg.cell_width

    border = np.ones_like(pixels, dtype=bool)
    border[m : height - m, m : width - m] = False
    if np.any(pixels[border] != cfg.background):
        raise UnrecognizedGlyph("ink found in the margin")
    if n_rows == 0:
        return "", []

    grid = pixels[m : height - m, m : width - m]
    bits = downsample(grid, s, cfg.foreground, cfg.background)
    if bits is None:
        raise UnrecognizedGlyph("grid holds a pixel that is not part of a font cell")
    cells = bits.reshape(n_rows, CELL_HEIGHT, n_cols, CELL_WIDTH).transpose(0, 2, 1, 3)

    rows: List[str] = []
    for r in range(n_rows):
        chars: List[str] = []
        ended = False
        for c in range(n_cols):
            cell = cells[r, c]
            if cell[:, GLYPH_WIDTH].any():
                raise UnrecognizedGlyph(f"ink in the glyph gap at row {r}, column {c}")
            glyph, gap_row = cell[:GLYPH_HEIGHT, :GLYPH_WIDTH], cell[GLYPH_HEIGHT, :GLYPH_WIDTH]
            if ended:
                if cell.any():
                    raise UnrecognizedGlyph(f"ink after end of row {r}, column {c}")
                continue
            if gap_row.any():
                if not gap_row[0] or gap_row[1:].any() or glyph.any():
                    raise UnrecognizedGlyph(f"malformed end-of-row tick at row {r}, column {c}")
                ended = True
                continue
            ch = lookup_bitmap(glyph)
            if ch is None:
                raise UnrecognizedGlyph(f"cell at row {r}, column {c} matches no glyph")
            chars.append(ch)
        rows.append("".join(chars))
    return join_rows(rows, cfg.wrap_columns), rows


def decode_text_image(image: Raster, cfg: Optional[RenderConfig] = None) -> str:
    """
    Exact inverse of render_text_image for the same config.

    Raises:
        UnrecognizedGlyph: A cell matches no font entry, or the geometry does not fit cfg
    """
    text, _ = _decode_pixels(image.pixels, cfg or RenderConfig())
    return text


def decode_padded_text(pixels: np.ndarray, cfg: Optional[RenderConfig] = None) -> str:
    """
    Decode a rendered text pane that was centered and padded with background.

    Candidate grid widths are tried from narrowest to widest and the first one
    that decodes with its widest row filling the grid wins. Blank columns at
    both ends of every row are indistinguishable from padding, so text whose
    rows all start with a blank column decodes with the fewest columns.
    """
    cfg = cfg or RenderConfig()
    height, width = pixels.shape
    max_cols = max((width - 2 * cfg.margin_px) // cfg.cell_width, 0)
    last_error: Optional[UnrecognizedGlyph] = None
    for cols in range(max_cols + 1):
        sub_w = 2 * cfg.margin_px + cols * cfg.cell_width
        left = (width - sub_w) // 2
        outside = np.concatenate([pixels[:, :left], pixels[:, left + sub_w :]], axis=1)
        if np.any(outside != cfg.background):
            continue
        try:
            text, rows = _decode_pixels(pixels[:, left : left + sub_w], cfg)
        except UnrecognizedGlyph as e:
            last_error = e
            continue
        if not rows or any(len(row) == cols for row in rows):
            return text
    raise last_error or UnrecognizedGlyph("no text grid fits the pane")


def _pad_to_width(pixels: np.ndarray, width: int, fill: int) -> np.ndarray:
    extra = width - pixels.shape[1]
    left = extra // 2
    return np.pad(pixels, ((0, 0), (left, extra - left)), mode="constant", constant_values=fill)


def compose_symv(v: Raster, t_img: Raster, cfg: Optional[RenderConfig] = None) -> Raster:
    """
    Stack the rendered question above the scene.

    Layout: T_img, an 8 px separator band at gray 128, then V; the narrower pane
    is centered and padded with background. V's pixels are never altered.
    """
    cfg = cfg or RenderConfig()
    width = max(v.width, t_img.width)
    top = _pad_to_width(t_img.pixels, width, cfg.background)
    band = np.full((SEPARATOR_HEIGHT, width), SEPARATOR_GRAY, dtype=np.uint8)
    bottom = _pad_to_width(v.pixels, width, cfg.background)
    return Raster(np.vstack([top, band, bottom]))


def split_symv(composite: Raster) -> Tuple[np.ndarray, np.ndarray]:
    """
    Split a SymV composite into (question pane, scene pane), both still padded.

    Raises:
        UnrecognizedGlyph: No separator band found
    """
    pixels = composite.pixels
    is_band = np.all(pixels == SEPARATOR_GRAY, axis=1)
    run = 0
    for y, flag in enumerate(is_band):
        run = run + 1 if flag else 0
        if run == SEPARATOR_HEIGHT:
            start = y - SEPARATOR_HEIGHT + 1
            return pixels[:start], pixels[y + 1 :]
    raise UnrecognizedGlyph("composite has no separator band")


def translate_item(item: EvaluationItem, cfg: Optional[RenderConfig] = None) -> EvaluationItem:
    """
    Fill T_img and the SymV composite of an item.

    Idempotent: derived images depend only on (T, V, cfg). The config used is
    recorded in meta["render"] so decoders can reproduce the grid.

    Raises:
        UnsupportedCharacter: T holds a character outside the font
        MissingImage: The item has no scene image to compose with
    """
    cfg = cfg or RenderConfig()
    if item.v is None:
        raise MissingImage(f"Item '{item.id}' has no scene image to translate")
    t_img = render_text_image(item.t, cfg)
    symv = compose_symv(item.v, t_img, cfg)
    meta = dict(item.meta)
    meta["render"] = cfg.model_dump()
    return replace(item, t_img=t_img, symv_composite=symv, meta=meta)


def render_config_of(item: EvaluationItem, key: str = "render") -> RenderConfig:
    """Render config recorded in item meta, or the default."""
    recorded = item.meta.get(key)
    return RenderConfig(**recorded) if recorded else RenderConfig()
