"""Pixel coverage of a plan's curve family.

A pixel counts as covered when at least one planned curve's clamped
trace passes through it, which is exactly the condition under which that
pixel can influence some sinogram cell.  Rasterisation reuses the
transform kernel's row indices, so coverage and transform always agree
on what "the curve touches this pixel" means.
"""

from __future__ import annotations

import io
import csv
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import reduce

import numpy as np

from ._kernel import block_row_indices, q_blocks
from .curves import ImageDims
from .errors import ConfigError, RadfuseError
from .plan import PlanConfig, TransformPlan, build_plan

__all__ = [
    "CoverageMap",
    "SweepRow",
    "coverage_of",
    "coverage_image",
    "coverage_sweep",
    "sweep_to_csv",
    "SWEEP_CSV_COLUMNS",
]

SWEEP_CSV_COLUMNS = (
    "M",
    "m_divisions",
    "special_c_count",
    "c_low",
    "c_high",
    "c_step",
    "curve_count",
    "fraction",
    "wall_ms",
)


@dataclass(frozen=True, eq=False)
class CoverageMap:
    dims: ImageDims
    visited: np.ndarray
    fraction: float


def coverage_of(plan: TransformPlan, workers: int = 1) -> CoverageMap:
    """Mark every pixel some planned curve passes through.

    Blocks of shifts are rasterised independently into per-block masks
    that are OR-merged afterwards; OR is idempotent and commutative, so
    the worker count cannot change the result.
    """
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    m = plan.dims.m
    c = np.ascontiguousarray(plan.c_values, dtype=np.float64)
    q = np.ascontiguousarray(plan.q_values, dtype=np.float64)
    cols = np.arange(m)

    def run_block(span: tuple[int, int]) -> np.ndarray:
        s, e = span
        idx = block_row_indices(c, q[s:e], m)
        mask = np.zeros((m, m), dtype=bool)
        mask[idx, cols] = True
        return mask

    spans = q_blocks(len(q), len(c), m)
    if workers == 1 or len(spans) == 1:
        masks = [run_block(span) for span in spans]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            masks = list(pool.map(run_block, spans))
    visited = reduce(np.logical_or, masks, np.zeros((m, m), dtype=bool))
    fraction = float(visited.sum()) / float(m * m)
    return CoverageMap(dims=plan.dims, visited=visited, fraction=fraction)


def coverage_image(cmap: CoverageMap) -> np.ndarray:
    """8-bit rendering of the visited mask: white = covered, black = missed."""
    return np.where(cmap.visited, np.uint8(255), np.uint8(0))


@dataclass(frozen=True)
class SweepRow:
    """One sweep result; ``error`` is set (and metrics are None) on failure."""

    config: PlanConfig
    curve_count: int | None = None
    fraction: float | None = None
    wall_ms: float | None = None
    error: str | None = None


def coverage_sweep(configs: list[PlanConfig], workers: int = 1) -> list[SweepRow]:
    """Measure coverage for each config independently.

    A config that fails to plan or rasterise contributes a row carrying
    the error text instead of aborting the remaining configs.
    """
    if not configs:
        raise ConfigError("sweep needs at least one config")
    rows: list[SweepRow] = []
    for config in configs:
        start = time.perf_counter()
        try:
            plan = build_plan(config)
            cmap = coverage_of(plan, workers=workers)
        except RadfuseError as exc:
            rows.append(SweepRow(config=config, error=str(exc)))
            continue
        wall_ms = (time.perf_counter() - start) * 1000.0
        rows.append(
            SweepRow(
                config=config,
                curve_count=plan.curve_count,
                fraction=cmap.fraction,
                wall_ms=wall_ms,
            )
        )
    return rows


def sweep_to_csv(rows: list[SweepRow]) -> str:
    """Render sweep rows as CSV with a fixed column order.

    Failed rows leave the metric columns empty; the error text lives on
    the SweepRow, not in the table.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_CSV_COLUMNS)
    for row in rows:
        cfg = row.config
        writer.writerow(
            [
                cfg.dims.m,
                cfg.m_divisions,
                cfg.special_c_count,
                cfg.c_range_low,
                cfg.c_range_high,
                cfg.c_range_step,
                "" if row.curve_count is None else row.curve_count,
                "" if row.fraction is None else repr(row.fraction),
                "" if row.wall_ms is None else f"{row.wall_ms:.3f}",
            ]
        )
    return buf.getvalue()
