"""Runtime scaling measurements for the transform engine.

Times default-plan transforms over a range of frame sides and fits the
log-log slope, giving an empirical growth exponent to compare against
the expected roughly quadratic cost in the frame side.  Benchmarks only
observe: they build their own synthetic inputs and never change what the
engine computes.
"""

from __future__ import annotations

import platform
import statistics
import time
from dataclasses import dataclass

import numpy as np
import scipy

from .curves import ImageDims
from .engine import radex_sinogram
from .errors import ConfigError
from .plan import PlanConfig, build_plan

__all__ = ["BenchRow", "BenchReport", "run_scaling_bench", "format_table"]


@dataclass(frozen=True)
class BenchRow:
    m: int
    curve_count: int
    plan_ms: float
    transform_ms: float
    pixels_per_second: float


@dataclass(frozen=True)
class BenchReport:
    rows: list[BenchRow]
    exponent: float
    workers: int
    environment: str

    def to_json_dict(self) -> dict:
        return {
            "rows": [vars(r) for r in self.rows],
            "exponent": self.exponent,
            "workers": self.workers,
            "environment": self.environment,
        }


def _synthetic_frame(m: int) -> np.ndarray:
    """Deterministic test pattern: a soft disk on a dark field."""
    coords = np.arange(m, dtype=np.float64) - (m - 1) / 2.0
    rr = np.hypot(coords[:, None], coords[None, :])
    return np.clip(1.0 - rr / (m / 2.0), 0.0, 1.0)


def run_scaling_bench(sizes: list[int], repetitions: int, workers: int = 1) -> BenchReport:
    """Median-of-repetitions transform timings per frame side.

    One untimed warm-up transform per size absorbs allocator and cache
    effects before the measured runs.  ``sizes`` needs at least two
    entries of 32 or more and ``repetitions`` at least 3, so the fit and
    the median are meaningful.
    """
    if len(sizes) < 2:
        raise ConfigError("need at least two frame sides to fit a scaling exponent")
    if any(m < 32 for m in sizes):
        raise ConfigError(f"frame sides below 32 are noise-dominated: {sorted(sizes)}")
    if repetitions < 3:
        raise ConfigError(f"repetitions must be >= 3, got {repetitions}")

    rows: list[BenchRow] = []
    for m in sorted(sizes):
        start = time.perf_counter()
        plan = build_plan(PlanConfig(dims=ImageDims(m)))
        plan_ms = (time.perf_counter() - start) * 1000.0
        frame = _synthetic_frame(m)
        radex_sinogram(frame, plan, workers=workers)  # warm-up, discarded
        timings = []
        for _ in range(repetitions):
            start = time.perf_counter()
            radex_sinogram(frame, plan, workers=workers)
            timings.append(time.perf_counter() - start)
        median_s = statistics.median(timings)
        rows.append(
            BenchRow(
                m=m,
                curve_count=plan.curve_count,
                plan_ms=plan_ms,
                transform_ms=median_s * 1000.0,
                pixels_per_second=(m * m) / median_s,
            )
        )
    log_m = np.log([r.m for r in rows])
    log_t = np.log([r.transform_ms for r in rows])
    exponent = float(np.polyfit(log_m, log_t, 1)[0])
    environment = (
        f"python {platform.python_version()}, numpy {np.__version__}, "
        f"scipy {scipy.__version__}, {platform.machine()}"
    )
    return BenchReport(rows=rows, exponent=exponent, workers=workers, environment=environment)


def format_table(report: BenchReport) -> str:
    lines = [
        f"{'M':>6} {'curves':>8} {'plan ms':>10} {'transform ms':>13} {'Mpx/s':>9}",
    ]
    for r in report.rows:
        lines.append(
            f"{r.m:>6} {r.curve_count:>8} {r.plan_ms:>10.2f} "
            f"{r.transform_ms:>13.2f} {r.pixels_per_second / 1e6:>9.2f}"
        )
    lines.append(f"fitted exponent: {report.exponent:.3f}  workers: {report.workers}")
    lines.append(report.environment)
    return "\n".join(lines)
