"""Lossless grayscale raster payloads."""

import hashlib
import io
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from PIL import Image

PNG_COMPRESS_LEVEL = 6


@dataclass(frozen=True, eq=False)
class Raster:
    """
    Immutable 8-bit grayscale image.

    Attributes:
        pixels: 2-D uint8 array, row-major (height, width); stored read-only
    """

    pixels: np.ndarray
    _digest: str = field(init=False, repr=False)

    def __post_init__(self) -> None:
        """Freeze the pixel buffer and precompute its digest."""
        arr = np.ascontiguousarray(self.pixels, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError(f"Raster must be 2-D, got shape {arr.shape}")
        if arr is self.pixels:
            arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

        h = hashlib.sha256()
        h.update(f"{arr.shape[0]}x{arr.shape[1]}:".encode("ascii"))
        h.update(arr.tobytes())
        object.__setattr__(self, "_digest", h.hexdigest())

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    def digest(self) -> str:
        """SHA-256 over shape and pixel bytes."""
        return self._digest

    def to_png_bytes(self) -> bytes:
        """Encode as non-interlaced 8-bit grayscale PNG."""
        buffer = io.BytesIO()
        Image.fromarray(np.asarray(self.pixels)).save(
            buffer, format="PNG", optimize=False, compress_level=PNG_COMPRESS_LEVEL
        )
        return buffer.getvalue()

    @classmethod
    def from_png_bytes(cls, data: bytes) -> "Raster":
        """Decode PNG bytes; non-grayscale images are rejected rather than converted."""
        with Image.open(io.BytesIO(data)) as img:
            if img.mode != "L":
                raise ValueError(f"Expected 8-bit grayscale PNG, got mode {img.mode}")
            return cls(np.array(img, dtype=np.uint8))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Raster):
            return NotImplemented
        return self._digest == other._digest

    def __hash__(self) -> int:
        return hash(self._digest)

    def __repr__(self) -> str:
        return f"Raster({self.width}x{self.height}, sha256={self._digest[:12]})"
