"""Side-by-side composition of an image and its rendered sinogram."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch

__all__ = ["FusedImage", "fuse"]


@dataclass(frozen=True, eq=False)
class FusedImage:
    """An ``m x 2m`` raster: source image left, sinogram rendering right."""

    pixels: np.ndarray
    source_id: str = ""
    plan_hash: str = ""

    @property
    def side(self) -> int:
        return self.pixels.shape[0]


def fuse(
    image: np.ndarray,
    sinogram_render: np.ndarray,
    source_id: str = "",
    plan_hash: str = "",
) -> FusedImage:
    """Concatenate the two squares horizontally, image first.

    Both inputs must be square with the same side; each half of the
    output is a bit-for-bit copy of its source.  The result keeps its
    doubled width; consumers resize if they need a square input.
    """
    a = np.asarray(image, dtype=np.float64)
    b = np.asarray(sinogram_render, dtype=np.float64)
    for name, arr in (("image", a), ("sinogram render", b)):
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"{name} must be square 2-D, got shape {arr.shape}")
    if a.shape != b.shape:
        raise DimensionMismatch(
            f"sides differ: image {a.shape[0]}, sinogram render {b.shape[0]}"
        )
    return FusedImage(
        pixels=np.hstack([a, b]),
        source_id=source_id,
        plan_hash=plan_hash,
    )
