"""Sigmoid curve geometry for the non-linear sinogram transform.

Every curve in the family is a logistic function of the column index::

    z(p) = M / (1 + exp(-c * (p - q)))

where ``M`` is the side length of the square working frame, ``q`` shifts
the curve horizontally (the inflection column) and ``c`` sets how steeply
it rises or falls.  Equivalently ``z = (M/2) * tanh(c*(p - q)/2) + M/2``.
The inverse, used when planning which curvatures to draw, is::

    c = ln(z / (M - z)) / (p - q)

valid for ``0 < z < M`` and ``p != q``.

All functions here are pure and thread-safe.  The sigmoid is evaluated
through :func:`scipy.special.expit`, which saturates cleanly to 0 or 1
for arguments beyond roughly +/-745 instead of overflowing, so extreme
parameters yield the asymptote (0 or ``M``) rather than ``inf``/``nan``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import ConfigError, DegenerateInverse, OutOfRange

__all__ = [
    "ImageDims",
    "CurveParams",
    "CurveTrace",
    "compute_z",
    "compute_c",
    "trace_curve",
]


@dataclass(frozen=True)
class ImageDims:
    """Side length of the square working frame.

    Parameters
    ----------
    m : int
        Frame side in pixels (width and height are equal).  Must be >= 2.
    """

    m: int

    def __post_init__(self) -> None:
        if not isinstance(self.m, (int, np.integer)) or isinstance(self.m, bool):
            raise ConfigError(f"frame side must be an integer, got {self.m!r}")
        if self.m < 2:
            raise ConfigError(f"frame side must be >= 2, got {self.m}")


@dataclass(frozen=True)
class CurveParams:
    """Shift and curvature of one sigmoid curve.

    Parameters
    ----------
    q : float
        Horizontal shift in pixels; the column of the inflection point.
    c : float
        Curvature rate in inverse pixels.  Positive curves rise with p,
        negative curves fall, zero gives the horizontal midline.
    """

    q: float
    c: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.q) or not math.isfinite(self.c):
            raise ConfigError(f"curve parameters must be finite, got q={self.q}, c={self.c}")


@dataclass(frozen=True)
class CurveTrace:
    """A curve rasterised onto the frame's integer columns.

    ``z_values[p]`` is the row index the curve passes through in column
    ``p``, already rounded (half-to-even) and clamped to ``[0, m-1]``.
    """

    params: CurveParams
    z_values: np.ndarray


def compute_z(p: float, params: CurveParams, dims: ImageDims) -> float:
    """Height of the curve at column ``p``.

    Parameters
    ----------
    p : float
        Column coordinate (need not be an integer).
    params : CurveParams
        Curve shift and curvature.
    dims : ImageDims
        Working frame.

    Returns
    -------
    float
        ``M / (1 + exp(-c * (p - q)))``.  Always finite; lies in the open
        interval ``(0, M)`` except when the exponent saturates, in which
        case exactly ``0.0`` or ``M`` is returned.
    """
    return dims.m * float(expit(params.c * (p - params.q)))


def compute_c(z: float, p: float, q: float, dims: ImageDims) -> float:
    """Curvature that makes the curve shifted by ``q`` reach height ``z`` at column ``p``.

    Inverts the forward equation: ``c = ln(z / (M - z)) / (p - q)``.

    Parameters
    ----------
    z : float
        Target height, strictly inside ``(0, M)``.
    p, q : float
        Column coordinate and horizontal shift; must differ.
    dims : ImageDims
        Working frame.

    Returns
    -------
    float
        The unique curvature ``c`` with ``compute_z(p, (q, c), dims) == z``.

    Raises
    ------
    OutOfRange
        If ``z <= 0`` or ``z >= M``; the logit diverges at the band edges.
    DegenerateInverse
        If ``p == q``; every curvature gives the same height there.
    """
    m = dims.m
    if not (0.0 < z < m):
        raise OutOfRange(f"height must lie strictly inside (0, {m}), got {z}")
    if p == q:
        raise DegenerateInverse(f"no curvature is recoverable at the anchor column p = q = {p}")
    return math.log(z / (m - z)) / (p - q)


def trace_curve(params: CurveParams, dims: ImageDims) -> CurveTrace:
    """Rasterise one curve across every integer column of the frame.

    For each ``p`` in ``0 .. m-1`` the height is rounded half-to-even and
    clamped into the valid row range, so the trace always indexes ``m``
    pixels even where the curve saturates above or below the frame.

    Returns
    -------
    CurveTrace
        Trace with an int64 ``z_values`` array of length ``m``.
    """
    m = dims.m
    p = np.arange(m, dtype=np.float64)
    z = np.rint(m * expit(params.c * (p - params.q)))
    np.clip(z, 0, m - 1, out=z)
    return CurveTrace(params=params, z_values=z.astype(np.int64))
