"""Baseline lossy JPEG codec over quantized-coefficient containers.

Images are plain ``(H, W, 3)`` uint8 RGB arrays. ``encode`` produces a
:class:`CompressedImage` holding per-component grids of quantized 8x8
DCT blocks; ``decode`` reverses the pipeline. The DCT is the exact
orthonormal float transform (a precomputed 8x8 matrix applied to all
blocks at once), not a fast integer approximation: correctness and
testability win over speed here.

Pipeline (encode): RGB -> full-range BT.601 YCbCr rounded to 8 bits,
optional 4:2:0 box-filter subsampling, level shift by -128, per-block
DCT, divide by the quality-scaled table and round half away from zero.
Decode mirrors it with nearest-neighbour chroma upsampling and one
final clamp to [0, 255].
"""

from dataclasses import dataclass

import numpy as np

from .tables import QuantTableSet, quality_to_tables

SUBSAMPLING_MODES = ("4:4:4", "4:2:0")

# Orthonormal type-II DCT matrix: row k is sqrt(2/8)*cos((2n+1)k*pi/16),
# row 0 scaled by 1/sqrt(2).
_n = np.arange(8)
DCT_MATRIX = np.sqrt(2.0 / 8.0) * np.cos((2 * _n[None, :] + 1) * _n[:, None] * np.pi / 16.0)
DCT_MATRIX[0, :] = np.sqrt(1.0 / 8.0)
del _n


class DecodeError(Exception):
    """Raised when a compressed stream cannot be parsed or decoded."""


@dataclass(frozen=True)
class CodecConfig:
    """Codec knobs: quality factor, chroma subsampling, entropy coding.

    ``quality`` may be ``None`` only on configs attached to streams
    parsed back from a file, where the factor is unrecoverable (it is
    not stored in JFIF).
    """

    quality: int | None
    chroma_subsampling: str = "4:2:0"
    entropy_coding: bool = False

    def __post_init__(self):
        if self.quality is not None and not 1 <= self.quality <= 100:
            raise ValueError(f"quality must be in [1, 100], got {self.quality}")
        if self.chroma_subsampling not in SUBSAMPLING_MODES:
            raise ValueError(f"chroma_subsampling must be one of {SUBSAMPLING_MODES}")


@dataclass
class CompressedImage:
    """Quantized coefficient planes plus everything needed to decode.

    ``planes`` maps component name ("y", "cb", "cr") to an int32 array
    of shape (blocks_high, blocks_wide, 8, 8). Block counts are
    ceil(w_c/8) x ceil(h_c/8) for the component's possibly subsampled
    dims. ``bitstream`` holds the JFIF bytes when entropy coding is on.
    """

    config: CodecConfig
    width: int
    height: int
    tables: QuantTableSet
    planes: dict[str, np.ndarray]
    bitstream: bytes | None = None

    def plane_dims(self, comp: str) -> tuple[int, int]:
        """(width, height) of a component before block padding."""
        if comp == "y" or self.config.chroma_subsampling == "4:4:4":
            return self.width, self.height
        return (self.width + 1) // 2, (self.height + 1) // 2


def validate_image(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"image must have shape (H, W, 3), got {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError("image dims must be >= 1")
    if img.dtype != np.uint8:
        raise ValueError(f"image must be uint8, got {img.dtype}")
    return img


def rgb_to_ycbcr(rgb: np.ndarray) -> np.ndarray:
    """Full-range BT.601 RGB -> YCbCr, rounded to 8-bit levels."""
    rgb = rgb.astype(np.float64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = -0.168735892 * r - 0.331264108 * g + 0.5 * b + 128.0
    cr = 0.5 * r - 0.418687589 * g - 0.081312411 * b + 128.0
    out = np.stack([y, cb, cr], axis=-1)
    return np.clip(np.rint(out), 0, 255)


def ycbcr_to_rgb(ycc: np.ndarray) -> np.ndarray:
    """Full-range BT.601 YCbCr -> RGB floats (caller clamps/rounds)."""
    y, cb, cr = ycc[..., 0], ycc[..., 1] - 128.0, ycc[..., 2] - 128.0
    r = y + 1.402 * cr
    g = y - 0.344136286 * cb - 0.714136286 * cr
    b = y + 1.772 * cb
    return np.stack([r, g, b], axis=-1)


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def _pad_to_multiple(plane: np.ndarray, multiple: int) -> np.ndarray:
    h, w = plane.shape
    ph = (-h) % multiple
    pw = (-w) % multiple
    if ph or pw:
        plane = np.pad(plane, ((0, ph), (0, pw)), mode="edge")
    return plane


def _to_blocks(plane: np.ndarray) -> np.ndarray:
    h, w = plane.shape
    return plane.reshape(h // 8, 8, w // 8, 8).swapaxes(1, 2)


def _from_blocks(blocks: np.ndarray) -> np.ndarray:
    bh, bw = blocks.shape[:2]
    return blocks.swapaxes(1, 2).reshape(bh * 8, bw * 8)


def _box_subsample(plane: np.ndarray) -> np.ndarray:
    """2x2 box filter with edge replication for odd dims."""
    padded = _pad_to_multiple(plane, 2)
    h, w = padded.shape
    quads = padded.reshape(h // 2, 2, w // 2, 2)
    return np.rint(quads.mean(axis=(1, 3)))


def forward_dct_blocks(blocks: np.ndarray) -> np.ndarray:
    """Orthonormal 2D DCT of an (..., 8, 8) stack of blocks."""
    return np.einsum("ij,...jk,lk->...il", DCT_MATRIX, blocks, DCT_MATRIX)


def inverse_dct_blocks(coeffs: np.ndarray) -> np.ndarray:
    return np.einsum("ji,...jk,kl->...il", DCT_MATRIX, coeffs, DCT_MATRIX)


def encode(img: np.ndarray, cfg: CodecConfig) -> CompressedImage:
    """Compress an RGB image into quantized coefficient planes."""
    img = validate_image(img)
    if cfg.quality is None:
        raise ValueError("encode requires a config with a quality factor")
    h, w = img.shape[:2]
    tables = quality_to_tables(cfg.quality)

    ycc = rgb_to_ycbcr(img)
    components = {"y": ycc[..., 0], "cb": ycc[..., 1], "cr": ycc[..., 2]}
    planes: dict[str, np.ndarray] = {}
    for name, plane in components.items():
        if name != "y" and cfg.chroma_subsampling == "4:2:0":
            plane = _box_subsample(plane)
        plane = _pad_to_multiple(plane, 8)
        blocks = _to_blocks(plane - 128.0)
        coeffs = forward_dct_blocks(blocks)
        table = tables.luma if name == "y" else tables.chroma
        planes[name] = _round_half_away(coeffs / table).astype(np.int32)

    compressed = CompressedImage(config=cfg, width=w, height=h,
                                 tables=tables, planes=planes)
    if cfg.entropy_coding:
        from .jfif import emit_jfif
        compressed.bitstream = emit_jfif(compressed)
    return compressed


def decode(c: CompressedImage) -> np.ndarray:
    """Reconstruct an RGB image from quantized coefficient planes."""
    full = {}
    for name, blocks in c.planes.items():
        table = c.tables.luma if name == "y" else c.tables.chroma
        coeffs = blocks.astype(np.float64) * table
        plane = _from_blocks(inverse_dct_blocks(coeffs)) + 128.0
        pw, ph = c.plane_dims(name)
        plane = plane[:ph, :pw]
        if plane.shape != (c.height, c.width):
            plane = plane.repeat(2, axis=0).repeat(2, axis=1)
            plane = plane[:c.height, :c.width]
        full[name] = plane

    ycc = np.stack([full["y"], full["cb"], full["cr"]], axis=-1)
    rgb = ycbcr_to_rgb(ycc)
    return np.clip(np.rint(rgb), 0, 255).astype(np.uint8)


def roundtrip(img: np.ndarray, quality: int,
              chroma_subsampling: str = "4:2:0") -> np.ndarray:
    """encode + decode in one call; the lossy JPEG_q operator."""
    cfg = CodecConfig(quality=quality, chroma_subsampling=chroma_subsampling)
    return decode(encode(img, cfg))


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical images."""
    a = validate_image(a)
    b = validate_image(b)
    if a.shape != b.shape:
        raise ValueError(f"dim mismatch: {a.shape} vs {b.shape}")
    mse = np.mean((a.astype(np.float64) - b.astype(np.float64)) ** 2)
    if mse == 0.0:
        return float("inf")
    return float(10.0 * np.log10(255.0 ** 2 / mse))
