"""Gabor filter bank texture features: 4 scales x 6 orientations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from ..image import ImageRaster, luminance

SCALES = (0.05, 0.1, 0.2, 0.4)  # center frequencies, cycles/pixel
NUM_ORIENTATIONS = 6  # theta_n = n * pi/6
GABOR_DIM = 2 * len(SCALES) * NUM_ORIENTATIONS

# Gaussian envelope sigma for a one-octave half-response bandwidth.
_BANDWIDTH_FACTOR = math.sqrt(math.log(2.0) / 2.0) * 3.0 / math.pi


def _make_kernel(freq: float, theta: float) -> np.ndarray:
    """Complex Gabor kernel: unit-L1 Gaussian envelope, DC-free both parts."""
    sigma = _BANDWIDTH_FACTOR / freq
    radius = math.ceil(3.0 * sigma)
    coords = np.arange(-radius, radius + 1, dtype=np.float64)
    x, y = np.meshgrid(coords, coords)
    x_rot = x * math.cos(theta) + y * math.sin(theta)
    envelope = np.exp(-(x * x + y * y) / (2.0 * sigma * sigma))
    envelope /= envelope.sum()
    kernel = envelope * np.exp(2j * math.pi * freq * x_rot)
    kernel -= kernel.real.mean()
    kernel -= 1j * kernel.imag.mean()
    return kernel


@dataclass(frozen=True)
class GaborBank:
    """24 complex kernels, scale-major then orientation, all DC-free."""

    scales: tuple[float, ...] = SCALES
    orientations: tuple[float, ...] = tuple(
        n * math.pi / NUM_ORIENTATIONS for n in range(NUM_ORIENTATIONS)
    )
    filters: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        if not self.filters:
            built = [
                _make_kernel(f, theta)
                for f in self.scales
                for theta in self.orientations
            ]
            object.__setattr__(self, "filters", built)


_SHARED_BANK: GaborBank | None = None


def default_bank() -> GaborBank:
    """Process-wide bank; built once, read-only thereafter."""
    global _SHARED_BANK
    if _SHARED_BANK is None:
        _SHARED_BANK = GaborBank()
    return _SHARED_BANK


def gabor_features(img: ImageRaster, bank: GaborBank | None = None) -> np.ndarray:
    """Mean and std of the response magnitude for each of the 24 filters.

    The image is reduced to [0, 1] luminance and convolved with each kernel
    (same-size output, edge-replicated borders). Output is scale-major,
    orientation-minor, with [mean, std] per filter.
    """
    bank = bank or default_bank()
    lum = luminance(img)
    out = np.empty(2 * len(bank.filters))
    for i, kernel in enumerate(bank.filters):
        radius = kernel.shape[0] // 2
        padded = np.pad(lum, radius, mode="edge")
        response = fftconvolve(padded, kernel, mode="valid")
        magnitude = np.abs(response)
        out[2 * i] = magnitude.mean()
        out[2 * i + 1] = magnitude.std()
    return out
