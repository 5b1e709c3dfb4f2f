import json

import numpy as np
import pytest

import radfuse
import radfuse_bindings
from radfuse import PlanConfig, ImageDims, harvest_special_c, select_special_c
from radfuse_bindings import (
    ConfigError,
    DataError,
    DimensionMismatch,
    EmptyRetina,
    PlanHandle,
    bind_build_plan,
    bind_fuse,
    bind_preprocess,
    bind_transform,
)


def test_version_pinned_to_primary():
    assert radfuse_bindings.__version__ == radfuse.__version__


class TestBuildPlan:
    def test_returns_opaque_handle(self):
        handle = bind_build_plan({"m": 64})
        assert isinstance(handle, PlanHandle)
        assert handle.frame_side == 64
        assert handle.q_count == 51

    def test_json_matches_primary_exactly(self):
        handle = bind_build_plan({"m": 64})
        plan = radfuse.build_plan(PlanConfig(dims=ImageDims(64)))
        assert handle.json == radfuse.plan_to_json(plan)
        assert handle.hash == radfuse.plan_hash(plan)

    def test_224_exposes_all_chosen_curvatures(self):
        handle = bind_build_plan({"m": 224})
        chosen = select_special_c(
            harvest_special_c(PlanConfig(dims=ImageDims(224))), count=112)
        assert len(np.unique(chosen)) == 112
        c_values = json.loads(handle.json)["c_values"]
        assert all(c in c_values for c in chosen)

    def test_overrides_are_honoured(self):
        handle = bind_build_plan({"m": 32, "m_divisions": 10, "special_c_count": 5})
        assert handle.q_count == 11

    def test_invalid_step_raises_config_error(self):
        with pytest.raises(ConfigError) as info:
            bind_build_plan({"m": 64, "c_range_step": 0.0})
        assert info.value.exit_code == 3

    def test_missing_m_rejected(self):
        with pytest.raises(ConfigError):
            bind_build_plan({"m_divisions": 10})

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            bind_build_plan({"m": 64, "grid": 10})

    def test_non_mapping_rejected(self):
        with pytest.raises(ConfigError):
            bind_build_plan([("m", 64)])


class TestTransform:
    def test_zeros_in_zeros_out(self):
        handle = bind_build_plan({"m": 16})
        out = bind_transform(np.zeros((16, 16), dtype=np.float32), handle)
        assert out.shape == (handle.c_count, handle.q_count)
        assert out.dtype == np.float32
        assert out.flags.c_contiguous
        assert not out.any()

    def test_ones_sum_to_frame_side(self):
        handle = bind_build_plan({"m": 16})
        out = bind_transform(np.ones((16, 16), dtype=np.float32), handle)
        assert (out == np.float32(16.0)).all()

    def test_worker_count_does_not_change_values(self, rng):
        handle = bind_build_plan({"m": 32})
        image = rng.random((32, 32), dtype=np.float32)
        a = bind_transform(image, handle, workers=1)
        b = bind_transform(image, handle, workers=4)
        assert np.array_equal(a, b)

    def test_float64_input_is_cast_at_the_boundary(self, rng):
        handle = bind_build_plan({"m": 16})
        image = rng.random((16, 16))
        a = bind_transform(image, handle)
        b = bind_transform(image.astype(np.float32), handle)
        assert np.array_equal(a, b)

    def test_side_mismatch_raises_data_error(self):
        handle = bind_build_plan({"m": 16})
        with pytest.raises(DataError) as info:
            bind_transform(np.zeros((8, 8)), handle)
        assert info.value.exit_code == 4

    def test_non_2d_input_rejected(self):
        handle = bind_build_plan({"m": 16})
        with pytest.raises(DimensionMismatch):
            bind_transform(np.zeros((16, 16, 3)), handle)

    def test_plain_dict_is_not_a_plan(self):
        with pytest.raises(ConfigError):
            bind_transform(np.zeros((16, 16)), {"m": 16})


class TestPreprocess:
    @staticmethod
    def synthetic(rng):
        h, w = 60, 72
        yy = np.arange(h)[:, None] - h / 2
        xx = np.arange(w)[None, :] - w / 2
        body = (np.hypot(yy, xx) < 24).astype(float)
        rgb = np.stack([0.8 * body, 0.5 * body, 0.2 * body], axis=-1)
        return (rgb + 0.05 * rng.random((h, w, 3)) * body[..., None]).astype(np.float32)

    def test_output_side_and_grid(self, rng):
        out = bind_preprocess(self.synthetic(rng), {"target_side": 32})
        assert out.shape == (32, 32)
        assert out.dtype == np.float32
        requantized = radfuse.to_uint8(out).astype(np.float32) / np.float32(255.0)
        assert np.array_equal(out, requantized)

    def test_default_config_side(self, rng):
        out = bind_preprocess(self.synthetic(rng))
        assert out.shape == (512, 512)

    def test_all_dark_raises_empty_retina(self):
        with pytest.raises(EmptyRetina) as info:
            bind_preprocess(np.zeros((40, 40, 3)))
        assert info.value.exit_code == 4

    def test_grayscale_input_rejected(self):
        with pytest.raises(DimensionMismatch):
            bind_preprocess(np.zeros((40, 40)))

    def test_unknown_config_key_rejected(self, rng):
        with pytest.raises(ConfigError):
            bind_preprocess(self.synthetic(rng), {"side": 32})


class TestFuse:
    def test_shape_and_left_half(self, rng):
        left = rng.random((24, 24), dtype=np.float32)
        right = rng.random((24, 24), dtype=np.float32)
        out = bind_fuse(left, right)
        assert out.shape == (24, 48)
        assert out.dtype == np.float32
        assert np.array_equal(out[:, :24], left)
        assert np.array_equal(out[:, 24:], right)

    def test_float64_inputs_cast_to_float32(self, rng):
        left = rng.random((8, 8))
        right = rng.random((8, 8))
        out = bind_fuse(left, right)
        assert np.array_equal(out[:, :8], left.astype(np.float32))

    def test_side_mismatch_rejected(self, rng):
        with pytest.raises(DataError):
            bind_fuse(rng.random((8, 8)), rng.random((16, 16)))

    def test_non_square_rejected(self, rng):
        with pytest.raises(DataError):
            bind_fuse(rng.random((8, 10)), rng.random((8, 10)))
