"""Benchmark harness tests at smoke scale."""

import numpy as np
import pytest

import rdie.bench as bench_mod
from rdie.bench import BENCH_OPS, BenchResult, bench_image, results_as_rows, run_bench
from rdie.entropy import EntropyMap, WindowSpec
from rdie.errors import EngineMismatchError


class TestBenchImage:
    def test_deterministic(self):
        a = bench_image((32, 48), seed=5)
        b = bench_image((32, 48), seed=5)
        assert a.dtype == np.uint8
        assert a.shape == (32, 48)
        np.testing.assert_array_equal(a, b)

    def test_seed_changes_content(self):
        assert not np.array_equal(bench_image((32, 32), seed=1), bench_image((32, 32), seed=2))


class TestRunBench:
    def test_smoke_64x64(self):
        results = run_bench(bench_image((64, 64)), WindowSpec(4, 4, 4, 8), reps=5)
        assert [r.op_name for r in results] == list(BENCH_OPS)
        for r in results:
            assert r.repetitions == 5
            assert r.median_ms > 0.0
            assert r.image_h == 64 and r.image_w == 64
        by_name = {r.op_name: r for r in results}
        assert by_name["GIE_naive"].speedup_vs_naive == 1.0
        assert by_name["RIE_naive"].speedup_vs_naive == 1.0
        assert by_name["GIE_fast"].speedup_vs_naive > 0.0
        assert by_name["RIE_fast"].speedup_vs_naive > 0.0

    def test_reps_below_minimum(self):
        with pytest.raises(ValueError):
            run_bench(bench_image((32, 32)), WindowSpec(4, 4, 4, 8), reps=4)

    def test_disagreeing_engines_abort(self, monkeypatch):
        def broken_fast(img, spec):
            values = bench_mod.entropy_map_naive(img, spec).values + 1.0
            return EntropyMap(values, spec)

        monkeypatch.setattr(bench_mod, "entropy_map_fast", broken_fast)
        with pytest.raises(EngineMismatchError):
            run_bench(bench_image((32, 32)), WindowSpec(4, 4, 4, 8), reps=5)


class TestRows:
    def test_row_schema(self):
        spec = WindowSpec(4, 4, 4, 8)
        rows = results_as_rows([BenchResult("RIE_fast", 64, 48, spec, 5, 1.25, 10.0)])
        assert rows == [
            {
                "op": "RIE_fast",
                "image": "48x64",
                "window": "4x4",
                "stride": 4,
                "levels": 8,
                "reps": 5,
                "median_ms": 1.25,
                "speedup_vs_naive": 10.0,
            }
        ]
