"""Image decoding, preprocessing, and color-space conversion."""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import InvalidImage

# Longest side after downscaling; keeps extraction cost bounded.
MAX_SIDE = 256
# Both dimensions padded up to a multiple of this (3-level DWT needs 8 | n).
PAD_MULTIPLE = 8

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class ImageRaster:
    """Decoded pixel grid, uint8, shape (height, width, channels)."""

    pixels: np.ndarray

    def __post_init__(self):
        p = self.pixels
        if p.ndim != 3 or p.shape[2] not in (1, 3) or p.dtype != np.uint8:
            raise InvalidImage(f"expected (h, w, 1|3) uint8 array, got {p.shape} {p.dtype}")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]


@dataclass(frozen=True)
class HsvRaster:
    """Per-pixel hue in degrees [0, 360), saturation and value in [0, 1]."""

    h: np.ndarray
    s: np.ndarray
    v: np.ndarray

    @property
    def height(self) -> int:
        return self.h.shape[0]

    @property
    def width(self) -> int:
        return self.h.shape[1]


def load_image(source: str | Path | bytes) -> ImageRaster:
    """Decode PNG/JPEG/BMP from a path or raw bytes into an ImageRaster."""
    try:
        if isinstance(source, bytes):
            img = Image.open(io.BytesIO(source))
        else:
            img = Image.open(source)
        img.load()
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise InvalidImage(f"cannot decode image: {exc}") from exc
    if img.mode == "L":
        arr = np.asarray(img, dtype=np.uint8)[:, :, None]
    else:
        arr = np.asarray(img.convert("RGB"), dtype=np.uint8)
    if arr.size == 0:
        raise InvalidImage("zero-area image")
    return ImageRaster(arr)


def preprocess(raw: ImageRaster) -> ImageRaster:
    """Normalize a decoded image for feature extraction.

    Downscales so the longest side is at most MAX_SIDE (bilinear, aspect
    preserved), replicates grayscale to 3 channels, and pads the bottom/right
    edges by replication until both dimensions are multiples of PAD_MULTIPLE.
    """
    arr = raw.pixels
    h, w = arr.shape[:2]
    if h == 0 or w == 0:
        raise InvalidImage("zero-area image")

    if arr.shape[2] == 1:
        arr = np.repeat(arr, 3, axis=2)

    longest = max(h, w)
    if longest > MAX_SIDE:
        scale = MAX_SIDE / longest
        new_w = max(1, round(w * scale))
        new_h = max(1, round(h * scale))
        resized = Image.fromarray(arr).resize((new_w, new_h), Image.BILINEAR)
        arr = np.asarray(resized, dtype=np.uint8)
        h, w = new_h, new_w

    pad_h = (-h) % PAD_MULTIPLE
    pad_w = (-w) % PAD_MULTIPLE
    if pad_h or pad_w:
        arr = np.pad(arr, ((0, pad_h), (0, pad_w), (0, 0)), mode="edge")

    return ImageRaster(np.ascontiguousarray(arr))


def rgb_to_hsv(img: ImageRaster) -> HsvRaster:
    """Hexcone RGB -> HSV. Achromatic pixels (max == min) get H = 0."""
    rgb = img.pixels.astype(np.float64) / 255.0
    r, g, b = rgb[:, :, 0], rgb[:, :, 1], rgb[:, :, 2]
    v = rgb.max(axis=2)
    mn = rgb.min(axis=2)
    c = v - mn

    h = np.zeros_like(v)
    nz = c > 0
    # Piecewise hue by which channel attains the max; ties resolved in
    # r -> g -> b order, matching the standard hexcone definition.
    rmax = nz & (v == r)
    gmax = nz & (v == g) & ~rmax
    bmax = nz & ~rmax & ~gmax
    h[rmax] = (g[rmax] - b[rmax]) / c[rmax] % 6.0
    h[gmax] = (b[gmax] - r[gmax]) / c[gmax] + 2.0
    h[bmax] = (r[bmax] - g[bmax]) / c[bmax] + 4.0
    h *= 60.0
    h[h >= 360.0] -= 360.0

    s = np.zeros_like(v)
    vs = v > 0
    s[vs] = c[vs] / v[vs]
    return HsvRaster(h=h, s=s, v=v)


def luminance(img: ImageRaster) -> np.ndarray:
    """Rec.601 luma of an RGB raster, scaled to [0, 1]."""
    rgb = img.pixels.astype(np.float64) / 255.0
    return rgb @ LUMA_WEIGHTS
