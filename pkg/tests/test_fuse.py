import numpy as np
import pytest

from radfuse import DimensionMismatch, FusedImage, fuse


class TestFuse:
    def test_shape_law(self, rng):
        out = fuse(rng.random((4, 4)), rng.random((4, 4)))
        assert isinstance(out, FusedImage)
        assert out.pixels.shape == (4, 8)
        assert out.side == 4

    def test_halves_are_exact_copies(self, rng):
        image = rng.random((6, 6))
        render = rng.random((6, 6))
        out = fuse(image, render)
        np.testing.assert_array_equal(out.pixels[:, :6], image)
        np.testing.assert_array_equal(out.pixels[:, 6:], render)

    def test_zero_render_right_half(self, rng):
        image = rng.random((5, 5))
        out = fuse(image, np.zeros((5, 5)))
        assert np.all(out.pixels[:, 5:] == 0.0)

    def test_distinct_inputs_produce_distinct_outputs(self, rng):
        a = rng.random((4, 4))
        b = rng.random((4, 4))
        first = fuse(a, b).pixels
        swapped = fuse(b, a).pixels
        assert not np.array_equal(first, swapped)

    def test_provenance_carried(self, rng):
        out = fuse(rng.random((4, 4)), rng.random((4, 4)), source_id="x.png", plan_hash="ab12")
        assert out.source_id == "x.png"
        assert out.plan_hash == "ab12"

    def test_rejects_side_mismatch(self):
        with pytest.raises(DimensionMismatch):
            fuse(np.zeros((4, 4)), np.zeros((5, 5)))

    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatch):
            fuse(np.zeros((4, 5)), np.zeros((4, 5)))

    def test_rejects_colour(self):
        with pytest.raises(DimensionMismatch):
            fuse(np.zeros((4, 4, 3)), np.zeros((4, 4, 3)))
