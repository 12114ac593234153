"""Composite 190-dimensional descriptor assembly."""

from __future__ import annotations

import numpy as np

from ..image import ImageRaster, preprocess, rgb_to_hsv
from .correlogram import CORRELOGRAM_DIM, auto_correlogram, quantize_rgb64
from .gabor import GABOR_DIM, GaborBank, gabor_features
from .histogram import HIST_DIM, hsv_histogram
from .moments import MOMENTS_DIM, color_moments
from .wavelet import WAVELET_DIM, wavelet_features

# Fixed block layout: name -> (start, stop) into the descriptor vector.
LAYOUT = {
    "hist32": (0, 32),
    "corr64": (32, 96),
    "moments6": (96, 102),
    "gabor48": (102, 150),
    "wavelet40": (150, 190),
}
DESCRIPTOR_DIM = 190

assert DESCRIPTOR_DIM == HIST_DIM + CORRELOGRAM_DIM + MOMENTS_DIM + GABOR_DIM + WAVELET_DIM


def compose_descriptor(raw: ImageRaster, bank: GaborBank | None = None) -> np.ndarray:
    """Run preprocessing and all five extractors, concatenated in LAYOUT order."""
    img = preprocess(raw)
    return np.concatenate(
        [
            hsv_histogram(rgb_to_hsv(img)),
            auto_correlogram(quantize_rgb64(img)),
            color_moments(img),
            gabor_features(img, bank),
            wavelet_features(img),
        ]
    )


def descriptor_blocks(descriptor: np.ndarray) -> dict[str, np.ndarray]:
    """Split a 190-vector into its named blocks (views, not copies)."""
    return {name: descriptor[a:b] for name, (a, b) in LAYOUT.items()}
