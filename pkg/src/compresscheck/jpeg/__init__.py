"""Quality-parameterized baseline JPEG codec."""

from .codec import (
    CodecConfig,
    CompressedImage,
    DecodeError,
    decode,
    encode,
    psnr,
    roundtrip,
    validate_image,
)
from .jfif import emit_jfif, parse_jfif
from .raster import read_image, read_ppm, write_image, write_ppm
from .tables import QuantTableSet, quality_to_tables

__all__ = [
    "CodecConfig",
    "CompressedImage",
    "DecodeError",
    "QuantTableSet",
    "decode",
    "emit_jfif",
    "encode",
    "parse_jfif",
    "psnr",
    "quality_to_tables",
    "read_image",
    "read_ppm",
    "roundtrip",
    "validate_image",
    "write_image",
    "write_ppm",
]
