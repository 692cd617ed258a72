"""Raster image value type: a float RGB grid in [0, 1].

The [0, 1] representation is used everywhere internally; conversion to 8-bit
PNG happens only at the I/O boundary.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image

__all__ = ["RasterImage"]

_PNG_DPI = (100, 100)


@dataclass
class RasterImage:
    """Fixed-size RGB image with float pixel values in [0, 1]."""

    pixels: np.ndarray  # (height, width, 3) float64

    def __post_init__(self):
        arr = np.asarray(self.pixels, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError(f"expected (H, W, 3) pixel array, got shape {arr.shape}")
        self.pixels = arr

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def size(self) -> tuple[int, int]:
        return (self.width, self.height)

    @classmethod
    def blank(cls, size: tuple[int, int], value: float = 1.0) -> "RasterImage":
        w, h = size
        return cls(np.full((h, w, 3), float(value), dtype=np.float64))

    @classmethod
    def black(cls, size: tuple[int, int]) -> "RasterImage":
        return cls.blank(size, 0.0)

    def is_black(self) -> bool:
        return bool(np.all(self.pixels == 0.0))

    def copy(self) -> "RasterImage":
        return RasterImage(self.pixels.copy())

    def to_uint8(self) -> np.ndarray:
        return np.clip(np.rint(self.pixels * 255.0), 0, 255).astype(np.uint8)

    def to_png_bytes(self) -> bytes:
        buf = io.BytesIO()
        Image.fromarray(self.to_uint8(), mode="RGB").save(buf, format="PNG", dpi=_PNG_DPI)
        return buf.getvalue()

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_png_bytes())

    @classmethod
    def from_png_bytes(cls, data: bytes) -> "RasterImage":
        img = Image.open(io.BytesIO(data)).convert("RGB")
        return cls(np.asarray(img, dtype=np.float64) / 255.0)

    @classmethod
    def load(cls, path) -> "RasterImage":
        with open(path, "rb") as fh:
            return cls.from_png_bytes(fh.read())
