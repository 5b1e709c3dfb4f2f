import json
import math

import pytest

from radfuse import ConfigError, run_scaling_bench


class TestScalingBench:
    def test_small_run_structure(self):
        report = run_scaling_bench([64, 32], repetitions=3)
        assert [r.m for r in report.rows] == [32, 64]
        for row in report.rows:
            assert row.plan_ms > 0
            assert row.transform_ms > 0
            assert row.pixels_per_second > 0
            assert row.curve_count > 0
        assert math.isfinite(report.exponent)
        assert report.workers == 1

    def test_report_serialises(self):
        report = run_scaling_bench([32, 48], repetitions=3)
        text = json.dumps(report.to_json_dict())
        doc = json.loads(text)
        assert len(doc["rows"]) == 2
        assert "environment" in doc

    def test_rejects_single_size(self):
        with pytest.raises(ConfigError):
            run_scaling_bench([64], repetitions=3)

    def test_rejects_tiny_frames(self):
        with pytest.raises(ConfigError):
            run_scaling_bench([16, 64], repetitions=3)

    def test_rejects_too_few_repetitions(self):
        with pytest.raises(ConfigError):
            run_scaling_bench([32, 64], repetitions=2)
