import numpy as np
import pytest

from radfuse import save_png, to_uint8


@pytest.fixture
def rng():
    return np.random.default_rng(20250823)


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    """Deterministic source images shared by the golden-file tests."""
    root = tmp_path_factory.mktemp("fixtures")
    gen = np.random.default_rng(1207)

    side = 64
    yy = np.arange(side)[:, None]
    xx = np.arange(side)[None, :]
    gradient = (yy + xx) / (2.0 * (side - 1))
    disk = np.hypot(yy - side / 2, xx - side / 2) < side / 3
    gray = np.clip(0.6 * gradient + 0.4 * disk + 0.05 * gen.random((side, side)), 0, 1)
    save_png(root / "gray.png", to_uint8(gray))

    h, w = 96, 120
    ry = np.arange(h)[:, None] - h / 2
    rx = np.arange(w)[None, :] - w / 2
    r = np.hypot(ry, rx)
    body = np.clip(1.0 - r / 40.0, 0.0, 1.0)
    rgb = np.stack([0.85 * body, 0.5 * body, 0.2 * body], axis=-1)
    rgb += 0.08 * gen.random((h, w, 3)) * (body > 0)[..., None]
    save_png(root / "fundus.png", to_uint8(np.clip(rgb, 0, 1)))

    return root
