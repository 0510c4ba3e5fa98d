"""Quantization tables and the quality-factor scaling rule.

The base tables are the ITU-T T.81 Annex K examples; the quality knob
follows the IJG convention: a scale factor of 5000/q below 50 and
200 - 2q at 50 and above, applied with integer arithmetic and the
result clamped to [1, 255].
"""

from dataclasses import dataclass

import numpy as np

# T.81 Annex K.1, natural (row-major) order.
BASE_LUMA = np.array([
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
], dtype=np.int32)

BASE_CHROMA = np.array([
    [17, 18, 24, 47, 99, 99, 99, 99],
    [18, 21, 26, 66, 99, 99, 99, 99],
    [24, 26, 56, 99, 99, 99, 99, 99],
    [47, 66, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
], dtype=np.int32)

# Zigzag scan: ZIGZAG[k] = (row, col) of the k-th coefficient. Odd
# anti-diagonals run top-right to bottom-left, even ones the reverse.
ZIGZAG = np.array(sorted(
    ((r, c) for r in range(8) for c in range(8)),
    key=lambda rc: (rc[0] + rc[1],
                    rc[0] if (rc[0] + rc[1]) % 2 else rc[1]),
), dtype=np.int64)


@dataclass(frozen=True)
class QuantTableSet:
    """Luma/chroma 8x8 quantization tables, every entry in [1, 255]."""

    luma: np.ndarray
    chroma: np.ndarray

    def __post_init__(self):
        for name, table in (("luma", self.luma), ("chroma", self.chroma)):
            if table.shape != (8, 8):
                raise ValueError(f"{name} table must be 8x8, got {table.shape}")
            if table.min() < 1 or table.max() > 255:
                raise ValueError(f"{name} table entries must be in [1, 255]")

    def __eq__(self, other):
        if not isinstance(other, QuantTableSet):
            return NotImplemented
        return (np.array_equal(self.luma, other.luma)
                and np.array_equal(self.chroma, other.chroma))


def _scale_table(base: np.ndarray, quality: int) -> np.ndarray:
    if quality < 50:
        scale = 5000 // quality
    else:
        scale = 200 - 2 * quality
    scaled = (base.astype(np.int64) * scale + 50) // 100
    return np.clip(scaled, 1, 255).astype(np.int32)


def quality_to_tables(quality: int) -> QuantTableSet:
    """Scale the Annex K base tables to a quality factor in [1, 100]."""
    if not isinstance(quality, (int, np.integer)):
        raise ValueError(f"quality must be an integer, got {type(quality).__name__}")
    if not 1 <= quality <= 100:
        raise ValueError(f"quality must be in [1, 100], got {quality}")
    return QuantTableSet(luma=_scale_table(BASE_LUMA, quality),
                         chroma=_scale_table(BASE_CHROMA, quality))


def zigzag_flatten(block: np.ndarray) -> np.ndarray:
    """8x8 block -> 64 coefficients in zigzag scan order."""
    return block[ZIGZAG[:, 0], ZIGZAG[:, 1]]


def zigzag_unflatten(coeffs: np.ndarray) -> np.ndarray:
    """64 zigzag-ordered coefficients -> 8x8 block."""
    block = np.empty((8, 8), dtype=np.asarray(coeffs).dtype)
    block[ZIGZAG[:, 0], ZIGZAG[:, 1]] = coeffs
    return block
