"""Acceptance suite: one test per release criterion.

Each test prints a single PASS/FAIL line (run with ``pytest -v -s`` to see
them all); a FAIL line is followed by a failing assertion with the same
detail.  Criterion 4 is expected to fail; see the comment on its test.
"""

import json
import math
import time

import numpy as np
import pytest
from scipy.ndimage import gaussian_filter

from rdie.bench import bench_image, run_bench
from rdie.cli import main
from rdie.entropy import (
    DEFAULT_SPEC,
    WindowSpec,
    entropy_map_fast,
    entropy_map_naive,
    global_entropy,
    region_entropy,
)
from rdie.harness import plcc, srcc
from rdie.metrics import mse, psnr, rdie_score, ssim

from conftest import stripe_image
from test_harness import oracle_pearson, oracle_spearman


def _report(name, ok, detail=""):
    print(f"acceptance[{name}] {'PASS' if ok else 'FAIL'}" + (f" {detail}" if detail else ""))
    return ok


def test_c1_engine_equivalence_on_random_inputs():
    """200 seeded (image, parameters) cases: the engines agree within 1e-9."""
    rng = np.random.default_rng(8675309)
    started = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        window = int(rng.integers(2, 9))
        stride = int(rng.integers(1, window + 1))
        levels = int(rng.choice([2, 4, 8, 32, 256]))
        height = int(rng.integers(8, 65))
        width = int(rng.integers(8, 65))
        img = rng.integers(0, 256, size=(height, width), dtype=np.uint8)
        spec = WindowSpec(window, window, stride, levels)
        naive = entropy_map_naive(img, spec).values
        fast = entropy_map_fast(img, spec).values
        worst = max(worst, float(np.max(np.abs(fast - naive))))
    elapsed = time.perf_counter() - started
    ok = worst <= 1e-9 and elapsed < 60.0
    detail = f"(200 cases, worst diff {worst:.2e}, {elapsed:.1f}s)"
    assert _report("engine-equivalence", ok, detail), detail


def test_c2_analytic_entropy_fixtures():
    """Hand-computable entropies come out exactly."""
    checks = []

    constant = region_entropy(np.zeros((4, 4), dtype=np.uint8), 0, 0, WindowSpec(4, 4, 4, 16))
    checks.append(("constant region", abs(constant - 0.0) <= 1e-12))

    two_level = region_entropy(np.array([[0, 1], [0, 1]], dtype=np.uint8), 0, 0, WindowSpec(2, 2, 2, 2))
    checks.append(("two equiprobable levels", abs(two_level - 1.0) <= 1e-12))

    q = np.array([[0] * 4, [0] * 4, [1] * 4, [2] * 4], dtype=np.uint8)
    split = region_entropy(q, 0, 0, WindowSpec(4, 4, 4, 4))
    checks.append(("8/4/4 of 16 split", abs(split - 1.5) <= 1e-12))

    binary = np.array([0] * 68 + [255] * 32, dtype=np.uint8).reshape(10, 10)
    got = global_entropy(binary, 2)
    expected = -(0.68 * math.log2(0.68) + 0.32 * math.log2(0.32))
    checks.append(("68:32 global entropy vs direct formula", abs(got - expected) <= 1e-12))
    checks.append(("68:32 global entropy value", abs(got - 0.904381) <= 1e-5))

    failed = [name for name, ok in checks if not ok]
    detail = f"({len(checks)} fixtures)" if not failed else f"(failed: {', '.join(failed)})"
    assert _report("analytic-fixtures", not failed, detail), detail


def test_c3_identical_histograms_different_maps():
    """A solid block and stripes with the same gray counts: global entropy is
    blind to the layout, the map difference is not."""
    block = np.zeros((16, 25), dtype=np.uint8)
    block[:, 17:] = 255
    stripes = np.zeros((16, 25), dtype=np.uint8)
    stripes[:, np.arange(25) % 3 == 2] = 255

    global_gap = abs(global_entropy(block, 2) - global_entropy(stripes, 2))
    score = rdie_score(block, stripes, WindowSpec(4, 4, 4, 2)).value
    ok = global_gap <= 1e-12 and score > 0.1
    detail = f"(global gap {global_gap:.1e}, map score {score:.4f})"
    assert _report("histogram-degeneracy", ok, detail), detail


def test_c4_quantization_sensitivity_on_boundary_pair():
    """Stripes of {127, 128} vs {0, 255} at 8 and 256 levels.

    Expected to FAIL on the all-zeros clause: 128 sits exactly on a bin edge
    at 8 levels (bin width 256/8 = 32), so floor(127 * 8 / 256) = 3 while
    floor(128 * 8 / 256) = 4 and the low-contrast pair keeps its contrast.
    No uniform binning can both split 31|32 and merge 127|128; a pair inside
    one bin, such as {100, 101}, does collapse as intended (see
    test_entropy.TestQuantizationSensitivity).
    """
    low = stripe_image(16, 16, (127, 128))
    high = stripe_image(16, 16, (0, 255))

    fine = WindowSpec(4, 4, 4, 256)
    maps_identical = np.allclose(
        entropy_map_fast(low, fine).values, entropy_map_fast(high, fine).values, atol=1e-12
    )
    coarse = WindowSpec(4, 4, 4, 8)
    low_all_zero = bool(np.all(entropy_map_fast(low, coarse).values == 0.0))
    high_all_one = bool(np.all(entropy_map_fast(high, coarse).values == 1.0))

    ok = maps_identical and low_all_zero and high_all_one
    detail = (
        f"(identical at 256 levels: {maps_identical}, "
        f"low-contrast all zeros at 8 levels: {low_all_zero}, "
        f"high-contrast all ones: {high_all_one}; "
        "the {127,128} pair straddles the bin edge at 128)"
    )
    assert _report("quantization-sensitivity", ok, detail), detail


def test_c5_benchmark_speedup():
    """Fast engine at least 50x the naive engine and under 2 s absolute."""
    results = run_bench(bench_image(), WindowSpec(4, 4, 4, 8), reps=5)
    by_name = {r.op_name: r for r in results}
    fast = by_name["RIE_fast"]
    ok = fast.speedup_vs_naive >= 50.0 and fast.median_ms < 2000.0
    detail = (
        f"(RIE_naive {by_name['RIE_naive'].median_ms:.0f} ms, "
        f"RIE_fast {fast.median_ms:.1f} ms, speedup {fast.speedup_vs_naive:.0f}x)"
    )
    assert _report("benchmark-speedup", ok, detail), detail


def test_c6_correlation_oracles():
    """srcc and plcc match brute-force references on 100 seeded vectors."""
    rng = np.random.default_rng(424242)
    worst_s = worst_p = 0.0
    cases = 0
    while cases < 100:
        if cases % 2 == 0:
            a = rng.integers(0, 8, size=20).astype(float)  # ties guaranteed
            b = rng.integers(0, 8, size=20).astype(float)
        else:
            a = rng.normal(size=20)
            b = rng.normal(size=20)
        if len(set(a.tolist())) < 2 or len(set(b.tolist())) < 2:
            continue
        cases += 1
        worst_s = max(worst_s, abs(srcc(a, b) - oracle_spearman(a.tolist(), b.tolist())))
        worst_p = max(worst_p, abs(plcc(a, b) - oracle_pearson(a.tolist(), b.tolist())))
    ok = worst_s <= 1e-12 and worst_p <= 1e-12
    detail = f"(100 vectors, worst srcc gap {worst_s:.1e}, worst plcc gap {worst_p:.1e})"
    assert _report("correlation-oracles", ok, detail), detail


def test_c7_blur_ladder_orders_correctly():
    """Entropy distance to the reference tracks blur strength."""
    rng = np.random.default_rng(20260810)
    ref = rng.integers(0, 256, size=(256, 256), dtype=np.uint8)
    sigmas = [0.5 * k for k in range(1, 9)]
    scores = []
    for sigma in sigmas:
        blurred = np.clip(np.rint(gaussian_filter(ref.astype(np.float64), sigma)), 0, 255)
        scores.append(rdie_score(blurred.astype(np.uint8), ref, DEFAULT_SPEC).value)
    correlation = srcc(scores, sigmas)
    ok = correlation >= 0.95
    detail = f"(8 blur levels, srcc {correlation:.4f})"
    assert _report("blur-ordering", ok, detail), detail


def test_c8_end_to_end_eval(tmp_path, write_png, capsys):
    """12-row manifest with MOS strictly decreasing in the entropy score:
    perfect rank agreement overall and per category, byte-identical runs."""
    rng = np.random.default_rng(77)
    spec = DEFAULT_SPEC
    rows = []
    for k in range(12):
        ref = rng.integers(0, 256, size=(20, 20), dtype=np.uint8)
        noise = rng.integers(-6 * (k + 1), 6 * (k + 1) + 1, size=(20, 20))
        test = np.clip(ref.astype(int) + noise, 0, 255).astype(np.uint8)
        ref_path = write_png(f"ref{k}.png", ref)
        test_path = write_png(f"test{k}.png", test)
        value = rdie_score(test, ref, spec).value
        rows.append((test_path.name, ref_path.name, f"m{k % 4}", f"cat{k % 3}", value))

    values = [value for *_, value in rows]
    assert len(set(values)) == len(values), "fixture needs pairwise distinct scores"
    lines = ["test_path,ref_path,method,category,mos"]
    for test_name, ref_name, method, category, value in rows:
        lines.append(f"{test_name},{ref_name},{method},{category},{10.0 - value!r}")
    manifest = tmp_path / "set.csv"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")

    outputs = []
    for run in range(2):
        out_file = tmp_path / f"eval{run}.json"
        code = main(["eval", str(manifest), "--format", "json", "--out", str(out_file)])
        capsys.readouterr()
        assert code == 0
        outputs.append(out_file.read_bytes())

    doc = json.loads(outputs[0])
    reports = {r["group"]: r for r in doc["reports"] if r["metric"] == "rdie"}
    expected_groups = ["all", "category:cat0", "category:cat1", "category:cat2"]
    perfect = all(reports[g]["srcc"] == 1.0 for g in expected_groups)
    identical = outputs[0] == outputs[1]
    ok = perfect and identical and len(doc["scores"]) == 12
    detail = (
        f"(srcc all/per-category {[reports[g]['srcc'] for g in expected_groups]}, "
        f"byte-identical: {identical})"
    )
    assert _report("end-to-end-eval", ok, detail), detail


def test_c9_metric_sanity():
    """Symmetry and fixed points of the scores."""
    rng = np.random.default_rng(55)
    spec = WindowSpec(4, 4, 4, 8)
    symmetric = zero_self = True
    for _ in range(50):
        a = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
        b = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
        symmetric &= rdie_score(a, b, spec).value == rdie_score(b, a, spec).value
        zero_self &= rdie_score(a, a, spec).value == 0.0

    black = np.zeros((8, 8), dtype=np.uint8)
    white = np.full((8, 8), 255, dtype=np.uint8)
    psnr_zero = psnr(black, white).value == 0.0

    img = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
    ssim_self = abs(ssim(img, img).value - 1.0) <= 1e-12

    ok = symmetric and zero_self and psnr_zero and ssim_self
    detail = (
        f"(symmetry: {symmetric}, zero-self: {zero_self}, "
        f"psnr(black,white)=0dB: {psnr_zero}, ssim(self)=1: {ssim_self})"
    )
    assert _report("metric-sanity", ok, detail), detail
