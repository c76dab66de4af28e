"""Wall-clock comparison of the serial and vectorized entropy engines."""

import statistics
import time
from dataclasses import dataclass

import numpy as np

from .entropy import (
    WindowSpec,
    entropy_map_fast,
    entropy_map_naive,
    global_entropy,
    global_entropy_naive,
)
from .errors import EngineMismatchError

BENCH_OPS = ("GIE_naive", "GIE_fast", "RIE_naive", "RIE_fast")
DEFAULT_BENCH_SHAPE = (1356, 2040)
DEFAULT_BENCH_SPEC = WindowSpec(4, 4, 4, 8)
DEFAULT_BENCH_SEED = 77229
MIN_REPS = 5
EQUALITY_TOL = 1e-9


@dataclass(frozen=True)
class BenchResult:
    op_name: str
    image_h: int
    image_w: int
    spec: WindowSpec
    repetitions: int
    median_ms: float
    speedup_vs_naive: float


def bench_image(shape=DEFAULT_BENCH_SHAPE, seed=DEFAULT_BENCH_SEED) -> np.ndarray:
    """Deterministic pseudo-random 8-bit image, so runs are comparable."""
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=shape, dtype=np.uint8)


def run_bench(img, spec=DEFAULT_BENCH_SPEC, reps=MIN_REPS) -> list:
    """Time global and regional entropy in both engines on the same input.

    Before any timing, the engines' outputs are checked for agreement; timing
    wrong answers would be meaningless.  Each operation runs reps + 1 times
    serially, the first run is discarded as warm-up, and the median of the
    rest is reported.  Speedups are relative to the matching naive operation.
    """
    if reps < MIN_REPS:
        raise ValueError(f"reps must be at least {MIN_REPS}, got {reps}")
    img = np.asarray(img)

    gie_naive = global_entropy_naive(img, spec.levels)
    gie_fast = global_entropy(img, spec.levels)
    if abs(gie_naive - gie_fast) > EQUALITY_TOL:
        raise EngineMismatchError(
            f"global entropy engines disagree: {gie_naive!r} vs {gie_fast!r}"
        )
    rie_naive = entropy_map_naive(img, spec)
    rie_fast = entropy_map_fast(img, spec)
    worst = float(np.max(np.abs(rie_naive.values - rie_fast.values)))
    if worst > EQUALITY_TOL:
        raise EngineMismatchError(f"entropy map engines disagree by up to {worst:g}")

    ops = {
        "GIE_naive": lambda: global_entropy_naive(img, spec.levels),
        "GIE_fast": lambda: global_entropy(img, spec.levels),
        "RIE_naive": lambda: entropy_map_naive(img, spec),
        "RIE_fast": lambda: entropy_map_fast(img, spec),
    }
    medians = {}
    for name in BENCH_OPS:
        op = ops[name]
        samples = []
        for _ in range(reps + 1):
            start = time.perf_counter()
            op()
            samples.append((time.perf_counter() - start) * 1e3)
        medians[name] = statistics.median(samples[1:])

    results = []
    for name in BENCH_OPS:
        baseline = medians["GIE_naive" if name.startswith("GIE") else "RIE_naive"]
        speedup = 1.0 if name.endswith("_naive") else baseline / medians[name]
        results.append(
            BenchResult(
                op_name=name,
                image_h=img.shape[0],
                image_w=img.shape[1],
                spec=spec,
                repetitions=reps,
                median_ms=medians[name],
                speedup_vs_naive=speedup,
            )
        )
    return results


def results_as_rows(results) -> list:
    """Flatten BenchResults into plain dicts for serialization."""
    return [
        {
            "op": r.op_name,
            "image": f"{r.image_w}x{r.image_h}",
            "window": f"{r.spec.win_h}x{r.spec.win_w}",
            "stride": r.spec.stride,
            "levels": r.spec.levels,
            "reps": r.repetitions,
            "median_ms": r.median_ms,
            "speedup_vs_naive": r.speedup_vs_naive,
        }
        for r in results
    ]
