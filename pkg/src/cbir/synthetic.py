"""Seeded synthetic corpus: 10 visually distinct color/texture families.

Used by the evaluation scripts and the end-to-end tests; not part of the
retrieval pipeline itself.
"""

from __future__ import annotations

import colorsys
from pathlib import Path

import numpy as np
from PIL import Image

# (name, base hue degrees, saturation, value, texture, texture param)
CLASS_SPECS = [
    ("red_flat", 0, 0.85, 0.80, "flat", 0.0),
    ("orange_vstripes", 30, 0.90, 0.85, "vstripes", 0.10),
    ("yellow_hstripes", 58, 0.85, 0.90, "hstripes", 0.20),
    ("green_checker", 120, 0.80, 0.70, "checker", 8.0),
    ("cyan_noise", 180, 0.75, 0.80, "noise", 0.25),
    ("blue_diag", 220, 0.85, 0.75, "diag", 0.12),
    ("purple_vstripes", 275, 0.80, 0.70, "vstripes", 0.30),
    ("magenta_checker", 315, 0.85, 0.80, "checker", 16.0),
    ("gray_flat", 0, 0.05, 0.55, "flat", 0.0),
    ("teal_hstripes", 165, 0.70, 0.60, "hstripes", 0.08),
]


def _texture_field(kind: str, param: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Multiplicative luminance field in [1-a, 1+a]."""
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    amp = 0.35
    if kind == "flat":
        field = np.zeros((size, size))
    elif kind == "vstripes":
        phase = rng.uniform(0, 2 * np.pi)
        field = np.sin(2 * np.pi * param * xx + phase)
    elif kind == "hstripes":
        phase = rng.uniform(0, 2 * np.pi)
        field = np.sin(2 * np.pi * param * yy + phase)
    elif kind == "diag":
        phase = rng.uniform(0, 2 * np.pi)
        field = np.sin(2 * np.pi * param * (xx + yy) / np.sqrt(2) + phase)
    elif kind == "checker":
        block = int(param)
        field = np.where(((yy // block) + (xx // block)) % 2 == 0, 1.0, -1.0)
    elif kind == "noise":
        field = rng.standard_normal((size, size)).clip(-2, 2) / 2
    else:
        raise ValueError(f"unknown texture {kind!r}")
    return 1.0 + amp * field


def make_class_image(class_idx: int, rng: np.random.Generator, size: int = 96) -> np.ndarray:
    """One uint8 RGB sample of the given class, with per-image jitter."""
    _, hue, sat, val, texture, param = CLASS_SPECS[class_idx % len(CLASS_SPECS)]
    hue = (hue + rng.uniform(-8, 8)) % 360
    sat = np.clip(sat + rng.uniform(-0.07, 0.07), 0.0, 1.0)
    val = np.clip(val + rng.uniform(-0.07, 0.07), 0.05, 1.0)
    r, g, b = colorsys.hsv_to_rgb(hue / 360.0, sat, val)
    base = np.array([r, g, b])

    field = _texture_field(texture, param, size, rng)
    img = base[None, None, :] * field[:, :, None]
    img += rng.normal(0.0, 0.015, img.shape)
    return (np.clip(img, 0.0, 1.0) * 255).round().astype(np.uint8)


def class_names(n_classes: int = 10) -> list[str]:
    return [f"{i:02d}_{CLASS_SPECS[i % len(CLASS_SPECS)][0]}" for i in range(n_classes)]


def generate_corpus(
    root: str | Path,
    n_classes: int = 10,
    per_class: int = 20,
    size: int = 96,
    seed: int = 1234,
) -> Path:
    """Write a directory-per-class PNG tree and return its root."""
    root = Path(root)
    rng = np.random.default_rng(seed)
    for cls, name in enumerate(class_names(n_classes)):
        class_dir = root / name
        class_dir.mkdir(parents=True, exist_ok=True)
        for i in range(per_class):
            img = make_class_image(cls, rng, size=size)
            Image.fromarray(img).save(class_dir / f"img_{i:04d}.png")
    return root
