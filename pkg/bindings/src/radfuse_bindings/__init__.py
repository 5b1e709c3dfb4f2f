"""In-process array bindings over the radfuse pipeline.

Four entry points mirror the command-line workflow without touching the
filesystem: ``bind_build_plan``, ``bind_transform``, ``bind_preprocess``
and ``bind_fuse``. Arrays cross the boundary as contiguous row-major
float32 with values in [0, 1], the same representation a PNG loaded by
``radfuse.load_image`` has. Holding that boundary is what makes the
outputs byte-faithful to the CLI artifacts: feed a binding the float32
pixels of a file and it returns exactly the numbers the corresponding
CLI command would have written.

Concretely:

* ``bind_transform`` returns the float32 sinogram matrix, identical to
  the payload of a ``.radexsg`` file produced from the same pixels.
* ``bind_preprocess`` returns the preprocessed frame on the 8-bit
  quantisation grid, identical to loading the PNG the CLI would save.
* ``bind_fuse`` concatenates image and render side by side; with
  file-faithful inputs the result maps to the fused PNG bit for bit.

Errors are the primary package's exception types re-exported unchanged,
so ``exc.exit_code`` carries the same process exit code the CLI would
use. Heavy lifting happens inside numpy and the primary engine's thread
pool, both of which release the interpreter lock while they run.
"""

from collections.abc import Mapping

import numpy as np

from radfuse import (
    ChannelMismatch,
    ConfigError,
    DataError,
    DegenerateInverse,
    DimensionMismatch,
    EmptyHarvest,
    EmptyRetina,
    ImageDims,
    OutOfRange,
    PlanConfig,
    PreprocessConfig,
    RadfuseError,
    TransformPlan,
    build_plan,
    fuse,
    plan_hash,
    plan_to_json,
    preprocess_pipeline,
    radex_sinogram,
    to_uint8,
)
from radfuse import __version__ as _primary_version

__version__ = _primary_version

__all__ = [
    "__version__",
    "PlanHandle",
    "bind_build_plan",
    "bind_transform",
    "bind_preprocess",
    "bind_fuse",
    "RadfuseError",
    "ConfigError",
    "DataError",
    "DegenerateInverse",
    "OutOfRange",
    "EmptyHarvest",
    "DimensionMismatch",
    "ChannelMismatch",
    "EmptyRetina",
]

_PLAN_KEYS = {
    "m",
    "m_divisions",
    "special_c_count",
    "c_range_low",
    "c_range_high",
    "c_range_step",
}

_PREPROCESS_KEYS = {
    "crop_threshold",
    "target_side",
    "graham_alpha",
    "graham_beta",
    "graham_gamma",
    "graham_sigma",
    "denoise_sigma",
}


class PlanHandle:
    """Opaque handle around a built transform plan.

    Callers inspect it through read-only properties; the wrapped plan
    object itself stays an implementation detail of the primary package.
    """

    __slots__ = ("_plan",)

    def __init__(self, plan: TransformPlan):
        self._plan = plan

    @property
    def frame_side(self) -> int:
        return self._plan.dims.m

    @property
    def q_count(self) -> int:
        return len(self._plan.q_values)

    @property
    def c_count(self) -> int:
        return len(self._plan.c_values)

    @property
    def json(self) -> str:
        """Canonical plan document, byte-identical to a saved plan file."""
        return plan_to_json(self._plan)

    @property
    def hash(self) -> str:
        return plan_hash(self._plan)

    def __repr__(self) -> str:
        return (
            f"PlanHandle(side={self.frame_side}, q={self.q_count}, "
            f"c={self.c_count}, hash={self.hash[:12]})"
        )


def _as_frame(array, name: str, ndim: int) -> np.ndarray:
    arr = np.asarray(array)
    if arr.ndim != ndim:
        raise DimensionMismatch(
            f"{name} must be a {ndim}-dimensional array, got shape {arr.shape}"
        )
    if not np.issubdtype(arr.dtype, np.floating) and not np.issubdtype(
        arr.dtype, np.integer
    ):
        raise DataError(f"{name} must hold numeric values, got dtype {arr.dtype}")
    return np.ascontiguousarray(arr, dtype=np.float32)


def _reject_unknown(config: Mapping, allowed: set, what: str) -> None:
    if not isinstance(config, Mapping):
        raise ConfigError(f"{what} config must be a mapping, got {type(config).__name__}")
    unknown = sorted(set(config) - allowed)
    if unknown:
        raise ConfigError(f"unknown {what} config keys: {', '.join(unknown)}")


def bind_build_plan(config: Mapping) -> PlanHandle:
    """Build a transform plan from a plain mapping.

    The key vocabulary is the same one the CLI sweep files use: ``m``
    (required frame side), ``m_divisions``, ``special_c_count``,
    ``c_range_low``, ``c_range_high``, ``c_range_step``. Omitted keys
    take the primary defaults, so ``{"m": 512}`` reproduces the plan
    ``radfuse plan --size 512`` writes, canonical JSON included.
    """
    _reject_unknown(config, _PLAN_KEYS, "plan")
    if "m" not in config:
        raise ConfigError("plan config needs an 'm' key (frame side)")
    plan_config = PlanConfig(
        dims=ImageDims(int(config["m"])),
        m_divisions=int(config.get("m_divisions", 50)),
        special_c_count=(
            int(config["special_c_count"]) if config.get("special_c_count") is not None
            else None
        ),
        c_range_low=float(config.get("c_range_low", -1.0)),
        c_range_high=float(config.get("c_range_high", 1.0)),
        c_range_step=float(config.get("c_range_step", 0.1)),
    )
    return PlanHandle(build_plan(plan_config))


def bind_transform(image, plan: PlanHandle, workers: int = 1) -> np.ndarray:
    """Transform a square grayscale frame into its sinogram matrix.

    Returns float32 of shape (curvature count, offset count), bit-equal
    to the payload the CLI stores in a ``.radexsg`` file for the same
    pixels. ``workers`` fans the curve family out over a thread pool;
    the result does not depend on it.
    """
    if not isinstance(plan, PlanHandle):
        raise ConfigError("plan must be a PlanHandle from bind_build_plan")
    frame = _as_frame(image, "image", 2)
    sino = radex_sinogram(frame, plan._plan, workers=workers)
    return sino.values.astype(np.float32)


def bind_preprocess(rgb, config: Mapping | None = None) -> np.ndarray:
    """Run the fundus preprocessing chain on a colour frame.

    Accepts (h, w, 3) pixels and an optional mapping with the
    ``PreprocessConfig`` field names (``target_side``, ``crop_threshold``
    and so on). The result is float32 on the 8-bit quantisation grid,
    exactly the values loading the CLI's output PNG would give.
    """
    frame = _as_frame(rgb, "rgb", 3)
    if config is None:
        pre_config = PreprocessConfig()
    else:
        _reject_unknown(config, _PREPROCESS_KEYS, "preprocess")
        kwargs = {}
        for key, value in config.items():
            if key == "target_side":
                kwargs[key] = int(value)
            elif value is None:
                kwargs[key] = None
            else:
                kwargs[key] = float(value)
        pre_config = PreprocessConfig(**kwargs)
    out = preprocess_pipeline(frame, pre_config)
    return to_uint8(out).astype(np.float32) / np.float32(255.0)


def bind_fuse(image, render) -> np.ndarray:
    """Place a frame and its sinogram render side by side.

    Both inputs must be square with the same side; the result is
    float32 of shape (side, 2 * side) with the left half bit-equal to
    ``image``. Feed it file-faithful inputs (the preprocessed PNG and
    the rendered sinogram PNG, loaded as float32) and quantising the
    result reproduces the CLI's fused PNG byte for byte.
    """
    left = _as_frame(image, "image", 2)
    right = _as_frame(render, "render", 2)
    fused = fuse(left, right)
    return np.ascontiguousarray(fused.pixels, dtype=np.float32)
