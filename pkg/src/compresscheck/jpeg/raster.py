"""Raster file I/O: PPM P6 (built in) and PNG (via optional Pillow)."""

import os

import numpy as np

from .codec import validate_image


def write_ppm(img: np.ndarray, path: str | os.PathLike) -> None:
    img = validate_image(img)
    h, w = img.shape[:2]
    with open(path, "wb") as f:
        f.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        f.write(img.tobytes())


def _read_token(f) -> bytes:
    # whitespace-delimited token, '#' starts a comment to end of line
    token = b""
    while True:
        ch = f.read(1)
        if not ch:
            raise ValueError("truncated PPM header")
        if ch == b"#":
            while ch and ch != b"\n":
                ch = f.read(1)
            continue
        if ch.isspace():
            if token:
                return token
            continue
        token += ch


def read_ppm(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as f:
        if _read_token(f) != b"P6":
            raise ValueError(f"{path}: not a P6 PPM file")
        w = int(_read_token(f))
        h = int(_read_token(f))
        maxval = int(_read_token(f))
        if maxval != 255:
            raise ValueError(f"{path}: only maxval 255 supported, got {maxval}")
        raw = f.read(w * h * 3)
    if len(raw) != w * h * 3:
        raise ValueError(f"{path}: truncated pixel data")
    return np.frombuffer(raw, dtype=np.uint8).reshape(h, w, 3).copy()


def _require_pillow():
    try:
        from PIL import Image as PILImage
    except ImportError as exc:  # pragma: no cover
        raise RuntimeError(
            "PNG support requires Pillow (pip install compresscheck[png])"
        ) from exc
    return PILImage


def read_png(path: str | os.PathLike) -> np.ndarray:
    pil = _require_pillow()
    with pil.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def write_png(img: np.ndarray, path: str | os.PathLike) -> None:
    pil = _require_pillow()
    pil.fromarray(validate_image(img), mode="RGB").save(path, format="PNG")


def read_image(path: str | os.PathLike) -> np.ndarray:
    """Dispatch on extension: .ppm built in, .png via Pillow."""
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".ppm":
        return read_ppm(path)
    if ext == ".png":
        return read_png(path)
    raise ValueError(f"unsupported image format: {path}")


def write_image(img: np.ndarray, path: str | os.PathLike) -> None:
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".ppm":
        write_ppm(img, path)
    elif ext == ".png":
        write_png(img, path)
    else:
        raise ValueError(f"unsupported image format: {path}")
