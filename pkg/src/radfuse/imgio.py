"""Image file loading, quantisation and saving.

Files are exchanged as 8-bit PNG/JPEG/PGM.  In memory, loaded images are
float32 in [0, 1] (the 8-bit levels divided by 255); library functions
upcast to float64 internally, which is exact, so results are identical
whether an array arrived from a file or was passed in directly.
"""

from __future__ import annotations

import numpy as np
from PIL import Image

from .errors import DataError

__all__ = ["load_image", "to_uint8", "save_png", "save_pgm"]


def load_image(path, force_rgb: bool = False) -> np.ndarray:
    """Read an image file as float32 in [0, 1].

    Greyscale files come back 2-D, colour files (h, w, 3); alpha is
    dropped.  ``force_rgb`` expands greyscale input to three channels.
    """
    try:
        with Image.open(path) as img:
            if force_rgb or img.mode not in ("L", "I;16"):
                img = img.convert("RGB")
            else:
                img = img.convert("L")
            raw = np.asarray(img, dtype=np.uint8)
    except (OSError, ValueError) as exc:
        raise DataError(f"{path}: cannot read image ({exc})") from exc
    return raw.astype(np.float32) / np.float32(255.0)


def to_uint8(values: np.ndarray) -> np.ndarray:
    """Quantise [0, 1] intensities to 8-bit levels (round half-to-even)."""
    return np.rint(np.clip(values, 0.0, 1.0) * 255.0).astype(np.uint8)


def save_png(path, levels: np.ndarray) -> None:
    """Write an 8-bit array (2-D greyscale or (h, w, 3) colour) as PNG."""
    a = np.ascontiguousarray(levels, dtype=np.uint8)
    mode = "L" if a.ndim == 2 else "RGB"
    Image.fromarray(a, mode=mode).save(path, format="PNG")


def save_pgm(path, levels: np.ndarray) -> None:
    """Write a 2-D 8-bit array as binary PGM (P5)."""
    a = np.ascontiguousarray(levels, dtype=np.uint8)
    if a.ndim != 2:
        raise DataError(f"PGM output needs a 2-D array, got shape {a.shape}")
    header = f"P5\n{a.shape[1]} {a.shape[0]}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(a.tobytes())
