"""Composite image descriptor: color and texture feature extractors."""

from .compose import (
    DESCRIPTOR_DIM,
    LAYOUT,
    compose_descriptor,
    descriptor_blocks,
)
from .correlogram import auto_correlogram, quantize_rgb64
from .gabor import GaborBank, gabor_features
from .histogram import hsv_histogram
from .moments import color_moments
from .wavelet import haar_dwt2, haar_idwt2, wavelet_features

__all__ = [
    "DESCRIPTOR_DIM",
    "LAYOUT",
    "GaborBank",
    "auto_correlogram",
    "color_moments",
    "compose_descriptor",
    "descriptor_blocks",
    "gabor_features",
    "haar_dwt2",
    "haar_idwt2",
    "hsv_histogram",
    "quantize_rgb64",
    "wavelet_features",
]
