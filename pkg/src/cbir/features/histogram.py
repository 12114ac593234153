"""32-bin HSV color histogram (8 hue x 2 saturation x 2 value bins)."""

import numpy as np

from ..image import HsvRaster

H_BINS, S_BINS, V_BINS = 8, 2, 2
HIST_DIM = H_BINS * S_BINS * V_BINS


def hsv_histogram(hsv: HsvRaster) -> np.ndarray:
    """Joint HSV histogram, normalized to sum to 1.

    Hue is binned uniformly into 8 bins of 45 degrees; saturation and value
    into 2 bins each, split at 0.5. Bin index = h*4 + s*2 + v.
    """
    h_idx = np.minimum((hsv.h / 45.0).astype(np.int64), H_BINS - 1)
    s_idx = (hsv.s >= 0.5).astype(np.int64)
    v_idx = (hsv.v >= 0.5).astype(np.int64)
    flat = (h_idx * (S_BINS * V_BINS) + s_idx * V_BINS + v_idx).ravel()
    counts = np.bincount(flat, minlength=HIST_DIM).astype(np.float64)
    return counts / flat.size
