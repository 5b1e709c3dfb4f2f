import numpy as np
import pytest

from radfuse import ImageDims, PlanConfig, TransformPlan


@pytest.fixture
def plan_factory():
    """Build a TransformPlan directly from explicit q and c lists.

    Lets tests exercise the engine with tiny hand-picked curve families
    that the normal plan builder would never produce.
    """

    def make(m, q_values, c_values):
        dims = ImageDims(m)
        config = PlanConfig(dims=dims, m_divisions=max(len(q_values) - 1, 1))
        return TransformPlan(
            dims=dims,
            q_values=np.asarray(q_values, dtype=np.float64),
            c_values=np.asarray(c_values, dtype=np.float64),
            config=config,
        )

    return make


@pytest.fixture
def disk_frame():
    """Factory for a centred binary disk on a dark field."""

    def make(m, radius=None, value=1.0):
        if radius is None:
            radius = m / 2.0 - 2.0
        coords = np.arange(m, dtype=np.float64) - (m - 1) / 2.0
        rr = np.hypot(coords[:, None], coords[None, :])
        return np.where(rr <= radius, float(value), 0.0)

    return make


@pytest.fixture
def rng():
    return np.random.default_rng(20250823)
