"""First two color moments per RGB channel."""

import numpy as np

from ..image import ImageRaster

MOMENTS_DIM = 6


def color_moments(img: ImageRaster) -> np.ndarray:
    """Per-channel mean and population standard deviation on [0, 1] scale.

    Order: [mean_R, mean_G, mean_B, std_R, std_G, std_B].
    """
    rgb = img.pixels.astype(np.float64) / 255.0
    flat = rgb.reshape(-1, 3)
    return np.concatenate([flat.mean(axis=0), flat.std(axis=0)])
