"""Parameter planning for the curve-family transform.

A plan fixes everything a transform needs: the frame side ``M``, the list
of horizontal shifts ``q`` and the assembled list of curvatures ``c``.
Construction follows three steps:

1. ``q`` values are an even grid over ``[0, M]`` with ``m_divisions``
   steps (both endpoints included).
2. Candidate curvatures are harvested by inverting the curve equation at
   the centre column ``p = M/2``: for every planned ``q`` and every
   integer height in the upper half of the frame, the curvature that
   sends the curve through that pixel is recorded.  This guarantees the
   chosen curves sweep the whole column.
3. The final curvature list concatenates an evenly indexed subset of the
   sorted harvest with two boundary ramps that pad the range out to
   ``[c_range_low, c_range_high]`` in ``c_range_step`` increments, then
   deduplicates.

Plans serialise to a canonical JSON document so a transform can be
reproduced exactly from the saved file; the SHA-256 of that document is
the plan's identity in manifests.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .curves import CurveParams, ImageDims, compute_c
from .errors import ConfigError, DataError, EmptyHarvest

__all__ = [
    "PLAN_FORMAT",
    "PlanConfig",
    "TransformPlan",
    "build_q_values",
    "harvest_special_c",
    "select_special_c",
    "boundary_c_values",
    "build_plan",
    "iter_curves",
    "plan_to_json",
    "plan_from_json",
    "save_plan",
    "load_plan",
    "plan_hash",
]

PLAN_FORMAT = "radfuse-plan-1"

# Values closer together than this are considered the same curvature.
_DEDUP_TOL = 1e-12


@dataclass(frozen=True)
class PlanConfig:
    """Knobs controlling plan construction.

    Parameters
    ----------
    dims : ImageDims
        Square frame the plan targets.
    m_divisions : int
        Number of steps in the ``q`` grid; the grid has ``m_divisions + 1``
        points.  Default 50.
    special_c_count : int or None
        How many harvested curvatures to keep.  ``None`` (the default)
        resolves to ``M // 2``.
    c_range_low, c_range_high : float
        Curvature range the boundary ramps pad out to.  Defaults -1, +1.
    c_range_step : float
        Ramp increment.  Default 0.1.
    """

    dims: ImageDims
    m_divisions: int = 50
    special_c_count: int | None = None
    c_range_low: float = -1.0
    c_range_high: float = 1.0
    c_range_step: float = 0.1

    def __post_init__(self) -> None:
        if self.m_divisions < 1:
            raise ConfigError(f"m_divisions must be >= 1, got {self.m_divisions}")
        if self.special_c_count is None:
            object.__setattr__(self, "special_c_count", self.dims.m // 2)
        if self.special_c_count < 1:
            raise ConfigError(f"special_c_count must be >= 1, got {self.special_c_count}")
        if not self.c_range_low < self.c_range_high:
            raise ConfigError(
                f"curvature range is empty: [{self.c_range_low}, {self.c_range_high}]"
            )
        if not self.c_range_step > 0:
            raise ConfigError(f"c_range_step must be positive, got {self.c_range_step}")


@dataclass(frozen=True, eq=False)
class TransformPlan:
    """A fully resolved transform: frame, ``q`` grid and curvature list."""

    dims: ImageDims
    q_values: np.ndarray
    c_values: np.ndarray
    config: PlanConfig

    @property
    def curve_count(self) -> int:
        return len(self.q_values) * len(self.c_values)


def build_q_values(config: PlanConfig) -> np.ndarray:
    """Even grid of ``m_divisions + 1`` shifts spanning ``[0, M]`` inclusive."""
    return np.linspace(0.0, config.dims.m, config.m_divisions + 1)


def harvest_special_c(config: PlanConfig) -> np.ndarray:
    """Collect curvatures that pass through every upper-half pixel of the centre column.

    With the anchor at ``p = M/2``, each planned shift ``q`` and each
    integer height ``z`` from ``ceil(M/2)`` to ``M - 1`` contributes the
    curvature solving the curve equation at that pixel (``z = M`` is
    outside the inverse's domain and excluded).  Grid shifts that land on
    the anchor column are skipped: no curvature is recoverable there, and
    the mirrored shift on the other side supplies the same magnitudes.

    Returns
    -------
    numpy.ndarray
        All harvested curvatures, sorted ascending, duplicates retained.
    """
    m = config.dims.m
    p = m / 2.0
    # Tolerance for "q sits on the anchor column": the grid may place a
    # point within a few ulp of M/2 rather than exactly on it.
    anchor_tol = 1e-9 * max(1.0, float(m))
    z_lo = -(-m // 2)  # ceil(M/2) as integer arithmetic
    values = []
    for q in build_q_values(config):
        if abs(p - q) <= anchor_tol:
            continue
        for z in range(z_lo, m):
            values.append(compute_c(float(z), p, float(q), config.dims))
    return np.sort(np.asarray(values, dtype=np.float64))


def select_special_c(harvest: np.ndarray, count: int) -> np.ndarray:
    """Take ``count`` elements from the sorted harvest at evenly spaced indices.

    Index ``k`` maps to ``round(k * (len - 1) / (count - 1))``, so the
    first and last harvest entries are always included and the selection
    preserves the harvest's distribution.  A single-element request picks
    the middle entry.  Requests larger than the harvest repeat indices;
    the subsequent dedup absorbs them.
    """
    if len(harvest) == 0:
        raise EmptyHarvest("cannot select curvatures from an empty harvest")
    if count == 1:
        idx = np.array([int(np.rint((len(harvest) - 1) / 2.0))])
    else:
        k = np.arange(count, dtype=np.float64)
        idx = np.rint(k * (len(harvest) - 1) / (count - 1)).astype(np.int64)
    return harvest[idx]


def boundary_c_values(
    harvest_min: float, harvest_max: float, config: PlanConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Arithmetic ramps padding the harvested range out to the configured one.

    The negative ramp runs from ``c_range_low`` upward in ``c_range_step``
    increments, stopping strictly below ``harvest_min``.  The positive
    ramp starts strictly above ``harvest_max`` and runs up to
    ``c_range_high`` inclusive (when the step lands on it).  Either ramp
    is empty when the harvest already reaches past the range end.
    """
    lo, hi, step = config.c_range_low, config.c_range_high, config.c_range_step
    # A half-ulp slack keeps exact multiples of the step on the intended
    # side of the boundary.
    n_neg = max(int(np.ceil((harvest_min - lo) / step - 1e-9)), 0)
    neg = lo + step * np.arange(n_neg, dtype=np.float64)
    n_pos = max(int(np.floor((hi - harvest_max) / step + 1e-9)), 0)
    pos = harvest_max + step * np.arange(1, n_pos + 1, dtype=np.float64)
    return neg, pos


def build_plan(config: PlanConfig) -> TransformPlan:
    """Assemble the full transform plan for ``config``.

    The curvature list is the deduplicated union of the boundary ramps
    and the evenly indexed harvest subset.  When the harvest contains the
    zero curvature (always the case for even frames) it is retained even
    if the index stride steps over the zero run, so every plan keeps the
    flat midline curve.

    Raises
    ------
    EmptyHarvest
        If no curvature could be harvested (every grid shift degenerate).
    """
    harvest = harvest_special_c(config)
    if len(harvest) == 0:
        raise EmptyHarvest(
            f"no usable curvatures for M={config.dims.m}, m_divisions={config.m_divisions}"
        )
    chosen = select_special_c(harvest, config.special_c_count)
    neg, pos = boundary_c_values(float(harvest[0]), float(harvest[-1]), config)
    parts = [neg, chosen, pos]
    if np.any(harvest == 0.0) and not np.any(np.abs(chosen) <= _DEDUP_TOL):
        parts.append(np.zeros(1))
    c_all = np.sort(np.concatenate(parts))
    keep = np.concatenate([[True], np.diff(c_all) > _DEDUP_TOL])
    # The +0.0 turns any surviving -0.0 into +0.0 for a cleaner JSON form.
    c_values = c_all[keep] + 0.0
    return TransformPlan(
        dims=config.dims,
        q_values=build_q_values(config),
        c_values=c_values,
        config=config,
    )


def iter_curves(plan: TransformPlan):
    """Yield ``(c_index, q_index, CurveParams)`` over the whole family, row-major."""
    for i, c in enumerate(plan.c_values):
        for j, q in enumerate(plan.q_values):
            yield i, j, CurveParams(q=float(q), c=float(c))


def _config_dict(config: PlanConfig) -> dict:
    return {
        "m": config.dims.m,
        "m_divisions": config.m_divisions,
        "special_c_count": config.special_c_count,
        "c_range_low": config.c_range_low,
        "c_range_high": config.c_range_high,
        "c_range_step": config.c_range_step,
    }


def plan_to_json(plan: TransformPlan) -> str:
    """Canonical JSON form of a plan: sorted keys, no whitespace.

    Identical plans always serialise to identical bytes, so the SHA-256
    of this string (see :func:`plan_hash`) identifies the plan.
    """
    doc = {
        "format": PLAN_FORMAT,
        "m": plan.dims.m,
        "m_divisions": plan.config.m_divisions,
        "q_values": plan.q_values.tolist(),
        "c_values": plan.c_values.tolist(),
        "config": _config_dict(plan.config),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def plan_from_json(text: str) -> TransformPlan:
    """Rebuild a plan from its JSON form.

    Raises
    ------
    DataError
        If the document is not valid JSON, has the wrong format tag, or
        is internally inconsistent.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"plan file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != PLAN_FORMAT:
        raise DataError(f"not a plan document (expected format {PLAN_FORMAT!r})")
    try:
        cfg_doc = doc["config"]
        config = PlanConfig(
            dims=ImageDims(int(cfg_doc["m"])),
            m_divisions=int(cfg_doc["m_divisions"]),
            special_c_count=int(cfg_doc["special_c_count"]),
            c_range_low=float(cfg_doc["c_range_low"]),
            c_range_high=float(cfg_doc["c_range_high"]),
            c_range_step=float(cfg_doc["c_range_step"]),
        )
        q_values = np.asarray(doc["q_values"], dtype=np.float64)
        c_values = np.asarray(doc["c_values"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"plan document is missing or corrupts a field: {exc}") from exc
    if int(doc["m"]) != config.dims.m:
        raise DataError("plan frame side disagrees with its config echo")
    if len(q_values) == 0 or len(c_values) == 0:
        raise DataError("plan has an empty parameter list")
    return TransformPlan(dims=config.dims, q_values=q_values, c_values=c_values, config=config)


def save_plan(path, plan: TransformPlan) -> None:
    """Write the canonical JSON to ``path`` (exactly the hashed bytes)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(plan_to_json(plan))


def load_plan(path) -> TransformPlan:
    with open(path, "r", encoding="utf-8") as fh:
        return plan_from_json(fh.read())


def plan_hash(plan: TransformPlan) -> str:
    """SHA-256 hex digest of the canonical JSON form."""
    return hashlib.sha256(plan_to_json(plan).encode("utf-8")).hexdigest()
