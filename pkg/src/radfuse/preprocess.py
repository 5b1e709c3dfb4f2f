"""Fundus-style image conditioning ahead of the transform.

The pipeline mirrors common retinal-image practice: crop away the dark
background, resize to a fixed working resolution, sharpen local contrast
by subtracting a heavily blurred copy (the classic high-pass recipe
``clamp(alpha*I + beta*G_sigma(I) + gamma)``), lightly denoise, and
convert to luminance last so the contrast step sees full colour.

Everything runs in float64 with values clamped to [0, 1] at each stage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter

from .errors import ChannelMismatch, ConfigError, EmptyRetina

__all__ = [
    "PreprocessConfig",
    "to_grayscale",
    "crop_black_border",
    "resize_bilinear",
    "gaussian_blur",
    "graham_normalize",
    "preprocess_pipeline",
]

_LUMA = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class PreprocessConfig:
    """Pipeline knobs.

    ``graham_sigma`` defaults to ``target_side / 30``, scaling the
    contrast surround with the working resolution.  ``graham_gamma`` of
    0.5 is the usual mid-grey offset (128 on an 8-bit scale).  Setting
    ``denoise_sigma`` to 0 skips the final smoothing pass.
    """

    crop_threshold: float = 0.03
    target_side: int = 512
    graham_alpha: float = 4.0
    graham_beta: float = -4.0
    graham_gamma: float = 0.5
    graham_sigma: float | None = None
    denoise_sigma: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.crop_threshold <= 1.0:
            raise ConfigError(f"crop_threshold must be in [0, 1], got {self.crop_threshold}")
        if self.target_side < 16:
            raise ConfigError(f"target_side must be >= 16, got {self.target_side}")
        if self.graham_sigma is None:
            object.__setattr__(self, "graham_sigma", self.target_side / 30.0)
        if not self.graham_sigma > 0:
            raise ConfigError(f"graham_sigma must be positive, got {self.graham_sigma}")
        if self.denoise_sigma < 0:
            raise ConfigError(f"denoise_sigma must be >= 0, got {self.denoise_sigma}")


def _luminance(image: np.ndarray) -> np.ndarray:
    if image.ndim == 2:
        return image
    return image @ _LUMA


def to_grayscale(rgb: np.ndarray) -> np.ndarray:
    """Rec. 601 luminance: ``0.299 R + 0.587 G + 0.114 B``, clamped to [0, 1]."""
    a = np.asarray(rgb, dtype=np.float64)
    if a.ndim != 3 or a.shape[2] != 3:
        raise ChannelMismatch(f"expected an (h, w, 3) array, got shape {a.shape}")
    return np.clip(a @ _LUMA, 0.0, 1.0)


def crop_black_border(image: np.ndarray, threshold: float) -> np.ndarray:
    """Tight bounding box of pixels brighter than ``threshold``.

    Colour images are judged by luminance but cropped with all channels.

    Raises
    ------
    EmptyRetina
        If nothing exceeds the threshold.
    """
    a = np.asarray(image, dtype=np.float64)
    mask = _luminance(a) > threshold
    if not mask.any():
        raise EmptyRetina(f"no pixel brighter than {threshold}; nothing to keep")
    row_hits = np.flatnonzero(mask.any(axis=1))
    col_hits = np.flatnonzero(mask.any(axis=0))
    return a[row_hits[0] : row_hits[-1] + 1, col_hits[0] : col_hits[-1] + 1].copy()


def resize_bilinear(image: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resize with corner-aligned sampling.

    Source coordinates run linearly from the first to the last pixel
    centre, so the four corners are copied through exactly and resizing
    to the original shape is the identity.
    """
    a = np.asarray(image, dtype=np.float64)
    h, w = a.shape[:2]
    r = np.linspace(0.0, h - 1, out_h)
    c = np.linspace(0.0, w - 1, out_w)
    r0 = np.minimum(np.floor(r).astype(np.int64), max(h - 2, 0))
    c0 = np.minimum(np.floor(c).astype(np.int64), max(w - 2, 0))
    r1 = np.minimum(r0 + 1, h - 1)
    c1 = np.minimum(c0 + 1, w - 1)
    fr = (r - r0).reshape(out_h, 1)
    fc = (c - c0).reshape(1, out_w)
    if a.ndim == 3:
        fr = fr[..., None]
        fc = fc[..., None]
    top = a[np.ix_(r0, c0)] * (1.0 - fc) + a[np.ix_(r0, c1)] * fc
    bottom = a[np.ix_(r1, c0)] * (1.0 - fc) + a[np.ix_(r1, c1)] * fc
    return top * (1.0 - fr) + bottom * fr


def gaussian_blur(image: np.ndarray, sigma: float) -> np.ndarray:
    """Gaussian smoothing; ``sigma <= 0`` is a no-op copy.

    The border is handled by mirroring about the edge pixel, which keeps
    a constant image constant and preserves total mass for content that
    stays away from the border.
    """
    a = np.asarray(image, dtype=np.float64)
    if sigma <= 0:
        return a.copy()
    if a.ndim == 3:
        return gaussian_filter(a, sigma=(sigma, sigma, 0.0), mode="mirror")
    return gaussian_filter(a, sigma=sigma, mode="mirror")


def graham_normalize(image: np.ndarray, config: PreprocessConfig) -> np.ndarray:
    """Local-contrast enhancement: ``clamp(alpha*I + beta*G_sigma(I) + gamma)``.

    With the default alpha = -beta the flat parts of the image settle at
    ``gamma`` while structure on scales below ``graham_sigma`` is
    amplified by ``|alpha|``.
    """
    a = np.asarray(image, dtype=np.float64)
    blurred = gaussian_blur(a, config.graham_sigma)
    return np.clip(
        config.graham_alpha * a + config.graham_beta * blurred + config.graham_gamma,
        0.0,
        1.0,
    )


def preprocess_pipeline(rgb: np.ndarray, config: PreprocessConfig | None = None) -> np.ndarray:
    """Full conditioning chain for one colour image.

    Crop to content, resize to the working square, enhance contrast
    channel-wise, denoise, then reduce to luminance.  The result is a
    ``target_side`` square in [0, 1].

    Raises
    ------
    ChannelMismatch
        If the input is not (h, w, 3).
    EmptyRetina
        If the crop finds no content.
    """
    if config is None:
        config = PreprocessConfig()
    a = np.asarray(rgb, dtype=np.float64)
    if a.ndim != 3 or a.shape[2] != 3:
        raise ChannelMismatch(f"expected an (h, w, 3) array, got shape {a.shape}")
    a = crop_black_border(a, config.crop_threshold)
    a = resize_bilinear(a, config.target_side, config.target_side)
    a = graham_normalize(a, config)
    a = gaussian_blur(a, config.denoise_sigma)
    return to_grayscale(np.clip(a, 0.0, 1.0))
