"""Color auto-correlogram over a 64-color RGB quantization."""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from ..errors import InvalidImage
from ..image import ImageRaster

NUM_COLORS = 64
DEFAULT_DISTANCES = (1, 3, 5, 7)
CORRELOGRAM_DIM = NUM_COLORS


def quantize_rgb64(img: ImageRaster) -> np.ndarray:
    """Quantize to 64 colors: 4 uniform bins per channel, label = 16r + 4g + b."""
    q = (img.pixels.astype(np.int64) // 64)
    return q[:, :, 0] * 16 + q[:, :, 1] * 4 + q[:, :, 2]


def _ring_offsets(d: int) -> list[tuple[int, int]]:
    """The 8*d offsets at chessboard (L-infinity) distance exactly d."""
    offsets = []
    for dy in range(-d, d + 1):
        for dx in range(-d, d + 1):
            if max(abs(dy), abs(dx)) == d:
                offsets.append((dy, dx))
    return offsets


def auto_correlogram(
    labels: np.ndarray, distances: Iterable[int] = DEFAULT_DISTANCES
) -> np.ndarray:
    """Probability, per color, that a same-ring neighbor shares the color.

    For each color c and distance d: the fraction of (pixel, neighbor) pairs
    at L-infinity distance exactly d whose colors are both c, normalized by
    the in-bounds neighbor count for color-c pixels. The returned 64-vector
    is the mean over the distance set; colors with no pixels (or no in-bounds
    neighbors at a distance) contribute 0 at that distance.
    """
    labels = np.asarray(labels)
    if labels.size == 0:
        raise InvalidImage("empty label grid")
    h, w = labels.shape
    distances = tuple(distances)

    acc = np.zeros(NUM_COLORS)
    for d in distances:
        num = np.zeros(NUM_COLORS)
        den = np.zeros(NUM_COLORS)
        for dy, dx in _ring_offsets(d):
            y0, y1 = max(0, -dy), h - max(0, dy)
            x0, x1 = max(0, -dx), w - max(0, dx)
            if y0 >= y1 or x0 >= x1:
                continue
            base = labels[y0:y1, x0:x1]
            nbr = labels[y0 + dy : y1 + dy, x0 + dx : x1 + dx]
            flat = base.ravel()
            den += np.bincount(flat, minlength=NUM_COLORS)
            num += np.bincount(flat[(base == nbr).ravel()], minlength=NUM_COLORS)
        nz = den > 0
        acc[nz] += num[nz] / den[nz]
    return acc / len(distances)
