import numpy as np
import pytest

from cbir.errors import InvalidImage
from cbir.features import auto_correlogram, quantize_rgb64

from conftest import random_image, solid_image
from oracles import correlogram_oracle


def test_quantize_corners_and_midpoint():
    assert quantize_rgb64(solid_image(0, 0, 0, 1, 1))[0, 0] == 0
    assert quantize_rgb64(solid_image(255, 255, 255, 1, 1))[0, 0] == 63
    # (70, 130, 200) -> bins (1, 2, 3) -> 16 + 8 + 3 = 27
    assert quantize_rgb64(solid_image(70, 130, 200, 1, 1))[0, 0] == 27


def test_uniform_image_is_one_hot():
    labels = quantize_rgb64(solid_image(70, 130, 200, 10, 10))
    corr = auto_correlogram(labels)
    assert corr.shape == (64,)
    assert corr[27] == 1.0
    assert corr.sum() == 1.0


def test_checkerboard_matches_exhaustive_count():
    board = np.zeros((4, 4), dtype=np.int64)
    board[::2, 1::2] = 27
    board[1::2, ::2] = 27
    got = auto_correlogram(board, distances=(1,))
    want = correlogram_oracle(board, distances=(1,))
    np.testing.assert_allclose(got, want, atol=1e-12)


@pytest.mark.parametrize("seed", range(6))
def test_random_small_images_match_oracle(seed):
    rng = np.random.default_rng(seed)
    labels = quantize_rgb64(random_image(rng, 8, 8))
    np.testing.assert_allclose(
        auto_correlogram(labels), correlogram_oracle(labels), atol=1e-12
    )


def test_entries_stay_in_unit_interval(rng):
    for _ in range(10):
        labels = quantize_rgb64(random_image(rng, 11, 7))
        corr = auto_correlogram(labels)
        assert (corr >= 0).all() and (corr <= 1).all()


def test_empty_grid_rejected():
    with pytest.raises(InvalidImage):
        auto_correlogram(np.zeros((0, 0), dtype=np.int64))
