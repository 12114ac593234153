"""3-level separable Haar DWT and per-subband statistics."""

from __future__ import annotations

import math

import numpy as np

from ..errors import InvalidImage
from ..image import ImageRaster, luminance

WAVELET_LEVELS = 3
WAVELET_DIM = 40  # 10 subbands x {mean, std, mean|c|, std|c|}

_SQRT2 = math.sqrt(2.0)


def _analysis(x: np.ndarray, axis: int) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal Haar split along one axis: (sum, difference) / sqrt(2)."""
    even = np.take(x, np.arange(0, x.shape[axis], 2), axis=axis)
    odd = np.take(x, np.arange(1, x.shape[axis], 2), axis=axis)
    return (even + odd) / _SQRT2, (even - odd) / _SQRT2


def _synthesis(lo: np.ndarray, hi: np.ndarray, axis: int) -> np.ndarray:
    """Inverse of _analysis."""
    shape = list(lo.shape)
    shape[axis] *= 2
    out = np.empty(shape)
    even = [slice(None)] * lo.ndim
    odd = [slice(None)] * lo.ndim
    even[axis] = slice(0, None, 2)
    odd[axis] = slice(1, None, 2)
    out[tuple(even)] = (lo + hi) / _SQRT2
    out[tuple(odd)] = (lo - hi) / _SQRT2
    return out


def haar_dwt2(plane: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """One 2-D Haar level. Returns (LL, LH, HL, HH).

    The first letter is the filter along x (width), the second along y
    (height); e.g. HL is high-pass across columns, low-pass across rows.
    """
    if plane.shape[0] % 2 or plane.shape[1] % 2:
        raise InvalidImage(f"dimensions must be even, got {plane.shape}")
    lo_x, hi_x = _analysis(plane, axis=1)
    ll, lh = _analysis(lo_x, axis=0)
    hl, hh = _analysis(hi_x, axis=0)
    return ll, lh, hl, hh


def haar_idwt2(
    ll: np.ndarray, lh: np.ndarray, hl: np.ndarray, hh: np.ndarray
) -> np.ndarray:
    """Inverse of haar_dwt2."""
    lo_x = _synthesis(ll, lh, axis=0)
    hi_x = _synthesis(hl, hh, axis=0)
    return _synthesis(lo_x, hi_x, axis=1)


def haar_subbands(plane: np.ndarray, levels: int = WAVELET_LEVELS) -> list[np.ndarray]:
    """Detail subbands (LH, HL, HH) per level, then the final approximation."""
    bands: list[np.ndarray] = []
    ll = plane
    for _ in range(levels):
        ll, lh, hl, hh = haar_dwt2(ll)
        bands.extend([lh, hl, hh])
    bands.append(ll)
    return bands


def wavelet_features(img: ImageRaster) -> np.ndarray:
    """Statistics of the 10 subbands of a 3-level Haar DWT on luminance.

    Per subband, in order LH1, HL1, HH1, ..., HH3, LL3: mean, standard
    deviation, mean of absolute values, standard deviation of absolute
    values. Requires both dimensions to be multiples of 8.
    """
    if img.height % 8 or img.width % 8:
        raise InvalidImage(
            f"wavelet features need dimensions divisible by 8, got "
            f"{img.height}x{img.width}"
        )
    lum = luminance(img)
    out = np.empty(WAVELET_DIM)
    for i, band in enumerate(haar_subbands(lum)):
        mag = np.abs(band)
        out[4 * i : 4 * i + 4] = (band.mean(), band.std(), mag.mean(), mag.std())
    return out
