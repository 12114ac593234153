import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cbir.image import ImageRaster
from cbir.synthetic import generate_corpus


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def solid_image(r: int, g: int, b: int, h: int = 16, w: int = 16) -> ImageRaster:
    pixels = np.zeros((h, w, 3), dtype=np.uint8)
    pixels[:, :] = (r, g, b)
    return ImageRaster(pixels)


def random_image(rng: np.random.Generator, h: int = 16, w: int = 16) -> ImageRaster:
    return ImageRaster(rng.integers(0, 256, (h, w, 3), dtype=np.uint8))


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory) -> Path:
    """4 classes x 5 images, 48 px; shared by store/CLI/service tests."""
    root = tmp_path_factory.mktemp("corpus")
    return generate_corpus(root, n_classes=4, per_class=5, size=48, seed=99)
