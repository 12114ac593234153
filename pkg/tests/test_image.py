import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cbir.errors import InvalidImage
from cbir.image import ImageRaster, load_image, preprocess, rgb_to_hsv

from conftest import solid_image


def test_preprocess_halves_oversized_image():
    raw = ImageRaster(np.zeros((256, 512, 3), dtype=np.uint8))
    out = preprocess(raw)
    assert (out.height, out.width) == (128, 256)


def test_preprocess_grayscale_replicated_and_padded():
    raw = ImageRaster(np.arange(100 * 100, dtype=np.uint64).reshape(100, 100, 1).astype(np.uint8))
    out = preprocess(raw)
    assert (out.height, out.width, out.channels) == (104, 104, 3)
    assert np.array_equal(out.pixels[:, :, 0], out.pixels[:, :, 1])
    assert np.array_equal(out.pixels[:, :, 0], out.pixels[:, :, 2])
    # padding replicates the last row/column
    assert np.array_equal(out.pixels[99], out.pixels[103])


def test_preprocess_zero_area_rejected():
    raw = ImageRaster(np.zeros((0, 0, 3), dtype=np.uint8))
    with pytest.raises(InvalidImage):
        preprocess(raw)


def test_preprocess_small_image_passes_through():
    raw = ImageRaster(np.full((64, 40, 3), 9, dtype=np.uint8))
    out = preprocess(raw)
    assert (out.height, out.width) == (64, 40)
    assert np.array_equal(out.pixels, raw.pixels)


@settings(max_examples=40, deadline=None)
@given(h=st.integers(1, 600), w=st.integers(1, 600))
def test_preprocess_postconditions(h, w):
    out = preprocess(ImageRaster(np.zeros((h, w, 3), dtype=np.uint8)))
    assert max(out.height, out.width) <= 256
    assert out.height % 8 == 0 and out.width % 8 == 0
    assert out.height >= 8 and out.width >= 8
    assert out.channels == 3


def test_rgb_to_hsv_known_colors():
    hsv = rgb_to_hsv(solid_image(255, 0, 0, 2, 2))
    assert hsv.h[0, 0] == 0.0 and hsv.s[0, 0] == 1.0 and hsv.v[0, 0] == 1.0

    hsv = rgb_to_hsv(solid_image(128, 128, 128, 2, 2))
    assert hsv.h[0, 0] == 0.0 and hsv.s[0, 0] == 0.0
    assert hsv.v[0, 0] == pytest.approx(128 / 255)

    hsv = rgb_to_hsv(solid_image(0, 255, 255, 2, 2))
    assert hsv.h[0, 0] == 180.0 and hsv.s[0, 0] == 1.0 and hsv.v[0, 0] == 1.0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_rgb_to_hsv_ranges(r, g, b):
    hsv = rgb_to_hsv(solid_image(r, g, b, 1, 1))
    assert 0.0 <= hsv.h[0, 0] < 360.0
    assert 0.0 <= hsv.s[0, 0] <= 1.0
    assert 0.0 <= hsv.v[0, 0] <= 1.0


def test_load_image_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.png"
    bad.write_bytes(b"not an image at all")
    with pytest.raises(InvalidImage):
        load_image(bad)
    with pytest.raises(InvalidImage):
        load_image(b"\x00\x01\x02")
