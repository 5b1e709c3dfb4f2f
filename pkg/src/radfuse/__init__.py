"""Curve-family sinogram transforms for square images.

The toolkit plans a family of logistic curves
``z(p) = M / (1 + exp(-c * (p - q)))`` over an ``M x M`` frame,
integrates image intensity along every planned curve to build a
sinogram, measures how much of the frame the family touches, conditions
colour images ahead of the transform, and composes image and sinogram
side by side for downstream consumers.  A straight-line projection
baseline and a scaling benchmark round out the API; the ``radfuse``
command exposes everything for batch use.
"""

from .bench import BenchReport, BenchRow, format_table, run_scaling_bench
from .coverage import (
    CoverageMap,
    SweepRow,
    SWEEP_CSV_COLUMNS,
    coverage_image,
    coverage_of,
    coverage_sweep,
    sweep_to_csv,
)
from .curves import (
    CurveParams,
    CurveTrace,
    ImageDims,
    compute_c,
    compute_z,
    trace_curve,
)
from .engine import (
    SINOGRAM_MAGIC,
    Sinogram,
    normalize_sinogram,
    radex_sinogram,
    radon_linear,
    read_sinogram,
    write_sinogram,
)
from .errors import (
    ChannelMismatch,
    ConfigError,
    DataError,
    DegenerateInverse,
    DimensionMismatch,
    EmptyHarvest,
    EmptyRetina,
    OutOfRange,
    RadfuseError,
)
from .fuse import FusedImage, fuse
from .imgio import load_image, save_pgm, save_png, to_uint8
from .plan import (
    PLAN_FORMAT,
    PlanConfig,
    TransformPlan,
    boundary_c_values,
    build_plan,
    build_q_values,
    harvest_special_c,
    iter_curves,
    load_plan,
    plan_from_json,
    plan_hash,
    plan_to_json,
    save_plan,
    select_special_c,
)
from .preprocess import (
    PreprocessConfig,
    crop_black_border,
    gaussian_blur,
    graham_normalize,
    preprocess_pipeline,
    resize_bilinear,
    to_grayscale,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # curves
    "ImageDims",
    "CurveParams",
    "CurveTrace",
    "compute_z",
    "compute_c",
    "trace_curve",
    # plan
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
    # engine
    "SINOGRAM_MAGIC",
    "Sinogram",
    "radex_sinogram",
    "normalize_sinogram",
    "radon_linear",
    "write_sinogram",
    "read_sinogram",
    # coverage
    "CoverageMap",
    "SweepRow",
    "SWEEP_CSV_COLUMNS",
    "coverage_of",
    "coverage_image",
    "coverage_sweep",
    "sweep_to_csv",
    # preprocess
    "PreprocessConfig",
    "to_grayscale",
    "crop_black_border",
    "resize_bilinear",
    "gaussian_blur",
    "graham_normalize",
    "preprocess_pipeline",
    # fuse
    "FusedImage",
    "fuse",
    # bench
    "BenchRow",
    "BenchReport",
    "run_scaling_bench",
    "format_table",
    # io
    "load_image",
    "to_uint8",
    "save_png",
    "save_pgm",
    # errors
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
