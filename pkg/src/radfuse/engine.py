"""Sinogram generation: the curve-family transform and a straight-line baseline.

The transform integrates image intensity along every curve of a plan's
family.  Each sinogram cell ``(i, j)`` is the sum of the ``m`` pixels the
curve with curvature ``c_i`` and shift ``q_j`` passes through, one pixel
per column, rows clamped at the frame border.  The result depends only
on the image and the plan, never on how the work was scheduled.

The straight-line baseline (:func:`radon_linear`) integrates along lines
instead, parameterised by angle and signed offset from the frame centre,
with conventional bilinear sampling.
"""

from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._kernel import block_row_indices, q_blocks
from .errors import ConfigError, DataError, DimensionMismatch
from .plan import TransformPlan, plan_from_json, plan_to_json

__all__ = [
    "SINOGRAM_MAGIC",
    "Sinogram",
    "radex_sinogram",
    "normalize_sinogram",
    "radon_linear",
    "write_sinogram",
    "read_sinogram",
]

SINOGRAM_MAGIC = b"RADEXSG1"


@dataclass(frozen=True, eq=False)
class Sinogram:
    """Matrix of curve integrals plus the plan that produced it.

    ``values[i, j]`` is the integral along the curve with the i-th
    curvature and the j-th shift; rows run over curvatures, columns over
    shifts.
    """

    values: np.ndarray
    plan: TransformPlan

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


def _as_square_f64(image: np.ndarray, side: int | None = None) -> np.ndarray:
    a = np.asarray(image)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square 2-D image, got shape {a.shape}")
    if side is not None and a.shape[0] != side:
        raise DimensionMismatch(
            f"image side {a.shape[0]} does not match the plan frame side {side}"
        )
    return np.ascontiguousarray(a, dtype=np.float64)


def radex_sinogram(image: np.ndarray, plan: TransformPlan, workers: int = 1) -> Sinogram:
    """Integrate the image along every planned curve.

    Parameters
    ----------
    image : array_like
        Square 2-D intensity raster with side equal to the plan's frame.
    plan : TransformPlan
        The curve family to integrate along.
    workers : int
        Thread count.  Work is split into fixed shift blocks that write
        disjoint sinogram columns, so any worker count produces bitwise
        identical values.

    Raises
    ------
    DimensionMismatch
        If the image is not square or its side differs from the plan.
    """
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    m = plan.dims.m
    img = _as_square_f64(image, side=m)
    c = np.ascontiguousarray(plan.c_values, dtype=np.float64)
    q = np.ascontiguousarray(plan.q_values, dtype=np.float64)
    cols = np.arange(m)
    out = np.empty((len(c), len(q)), dtype=np.float64)

    def run_block(span: tuple[int, int]) -> None:
        s, e = span
        idx = block_row_indices(c, q[s:e], m)
        # Gather one pixel per column along each curve, then reduce the
        # contiguous last axis; summation order is fixed by the shape.
        out[:, s:e] = img[idx, cols].sum(axis=-1)

    spans = q_blocks(len(q), len(c), m)
    if workers == 1 or len(spans) == 1:
        for span in spans:
            run_block(span)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_block, spans))
    return Sinogram(values=out, plan=plan)


def normalize_sinogram(s: Sinogram) -> np.ndarray:
    """Rescale a sinogram to [0, 1] and resample it onto the plan's frame.

    Min-max rescaling first (a constant sinogram maps to all zeros), then
    nearest-neighbour resampling with corner alignment up or down to
    ``m x m`` so the result can sit beside the source image.
    """
    m = s.plan.dims.m
    v = s.values
    vmin = float(v.min())
    vmax = float(v.max())
    if vmax == vmin:
        return np.zeros((m, m), dtype=np.float64)
    scaled = (v - vmin) / (vmax - vmin)
    ri = np.rint(np.linspace(0.0, s.rows - 1, m)).astype(np.int64)
    ci = np.rint(np.linspace(0.0, s.cols - 1, m)).astype(np.int64)
    return scaled[np.ix_(ri, ci)]


def _bilinear_zero_outside(img: np.ndarray, y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Bilinear samples of ``img`` at (y, x), zero beyond the frame."""
    m = img.shape[0]
    x0 = np.floor(x).astype(np.int64)
    y0 = np.floor(y).astype(np.int64)
    fx = x - x0
    fy = y - y0
    out = np.zeros(x.shape, dtype=np.float64)
    for dy in (0, 1):
        for dx in (0, 1):
            xi = x0 + dx
            yi = y0 + dy
            w = (fx if dx else 1.0 - fx) * (fy if dy else 1.0 - fy)
            valid = (xi >= 0) & (xi < m) & (yi >= 0) & (yi < m)
            np.clip(xi, 0, m - 1, out=xi)
            np.clip(yi, 0, m - 1, out=yi)
            out += np.where(valid, w * img[yi, xi], 0.0)
    return out


def radon_linear(image: np.ndarray, angle_count: int = 180) -> np.ndarray:
    """Straight-line projection baseline.

    Entry ``(r, k)`` sums bilinear samples along the line at angle
    ``k * 180 / angle_count`` degrees whose signed normal offset from the
    frame centre is ``r - (m - 1) / 2``, sampled at unit steps across the
    inscribed circle.  Output shape is ``(m, angle_count)``: rows are
    detector offsets, columns are angles.
    """
    if angle_count < 1:
        raise ConfigError(f"angle_count must be >= 1, got {angle_count}")
    img = _as_square_f64(image)
    m = img.shape[0]
    center = (m - 1) / 2.0
    radius = m / 2.0
    offsets = np.arange(m, dtype=np.float64) - center
    half_extent = np.sqrt(radius * radius - offsets * offsets)
    steps = np.floor(half_extent).astype(np.int64)
    s_max = int(steps.max())
    t = np.arange(-s_max, s_max + 1, dtype=np.float64)
    in_chord = np.abs(t)[None, :] <= steps[:, None]

    out = np.empty((m, angle_count), dtype=np.float64)
    for k in range(angle_count):
        theta = k * np.pi / angle_count
        ux, uy = np.cos(theta), np.sin(theta)
        # Normal direction; offset displaces the line sideways from centre.
        nx, ny = -np.sin(theta), np.cos(theta)
        x = center + offsets[:, None] * nx + t[None, :] * ux
        y = center + offsets[:, None] * ny + t[None, :] * uy
        samples = _bilinear_zero_outside(img, y, x)
        out[:, k] = np.where(in_chord, samples, 0.0).sum(axis=1)
    return out


def write_sinogram(path, s: Sinogram) -> None:
    """Serialise a sinogram to the binary container.

    Layout: 8-byte magic, little-endian u32 row and column counts, the
    values as row-major little-endian float32, then a u32 length prefix
    and the plan's canonical JSON as a UTF-8 trailer.
    """
    payload = np.ascontiguousarray(s.values, dtype="<f4").tobytes()
    trailer = plan_to_json(s.plan).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(SINOGRAM_MAGIC)
        fh.write(struct.pack("<II", s.rows, s.cols))
        fh.write(payload)
        fh.write(struct.pack("<I", len(trailer)))
        fh.write(trailer)


def read_sinogram(path) -> Sinogram:
    """Load a sinogram container, validating structure and plan agreement.

    Values come back as float64 (exact upcast of the stored float32).
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(SINOGRAM_MAGIC) + 8 or not blob.startswith(SINOGRAM_MAGIC):
        raise DataError(f"{path}: not a sinogram container (bad magic)")
    off = len(SINOGRAM_MAGIC)
    rows, cols = struct.unpack_from("<II", blob, off)
    off += 8
    n_bytes = rows * cols * 4
    if len(blob) < off + n_bytes + 4:
        raise DataError(f"{path}: truncated sinogram container")
    values = (
        np.frombuffer(blob, dtype="<f4", count=rows * cols, offset=off)
        .reshape(rows, cols)
        .astype(np.float64)
    )
    off += n_bytes
    (trailer_len,) = struct.unpack_from("<I", blob, off)
    off += 4
    if len(blob) < off + trailer_len:
        raise DataError(f"{path}: truncated plan trailer")
    plan = plan_from_json(blob[off : off + trailer_len].decode("utf-8"))
    if rows != len(plan.c_values) or cols != len(plan.q_values):
        raise DataError(f"{path}: matrix shape disagrees with the embedded plan")
    return Sinogram(values=values, plan=plan)
