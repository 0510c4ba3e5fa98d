"""Shared test utilities: seeded synthetic photo-like images."""

import numpy as np


def synthetic_photo(seed: int, height: int = 48, width: int = 48) -> np.ndarray:
    """Photo-ish test image: smoothed noise + gradient, uint8 RGB.

    Box-blurring white noise gives mid-frequency content so codec
    quality actually matters, unlike flat or pure-noise images.
    """
    rng = np.random.default_rng(seed)
    img = rng.uniform(0, 255, size=(height, width, 3))
    for _ in range(2):  # separable 3x3 box blur, edge padded
        padded = np.pad(img, ((1, 1), (1, 1), (0, 0)), mode="edge")
        img = sum(padded[dy:dy + height, dx:dx + width]
                  for dy in range(3) for dx in range(3)) / 9.0
    ramp = np.linspace(0, 60, width)[None, :, None]
    img = 0.75 * img + ramp + rng.uniform(-12, 12, size=img.shape)
    return np.clip(img, 0, 255).astype(np.uint8)
