"""Regional differential information entropy (RDIE) image quality metrics.

Images are quantized to a small number of gray levels, each sliding window
contributes one entropy value to a 2-D map, and two images are compared by
the root-mean-square difference of their maps (lower means more similar).
Baseline MSE/PSNR/SSIM metrics, an MOS-correlation harness and an engine
benchmark are included.
"""

from .bench import BenchResult, bench_image, run_bench
from .entropy import (
    DEFAULT_SPEC,
    EntropyMap,
    WindowSpec,
    entropy_activation,
    entropy_map_fast,
    entropy_map_naive,
    global_entropy,
    global_entropy_naive,
    grid_dims,
    quantize,
    region_entropy,
    step_activation,
    to_grayscale,
)
from .errors import (
    DecodeError,
    DimensionError,
    DomainError,
    EngineMismatchError,
    ManifestError,
    RdieError,
    UndefinedCorrelationError,
    WindowError,
)
from .harness import (
    CorrelationReport,
    ManifestEntry,
    ScoredTable,
    SweepPoint,
    aggregate,
    grid_sweep,
    load_manifest,
    plcc,
    score_dataset,
    srcc,
)
from .imgio import load_gray, save_gray
from .metrics import (
    MetricScore,
    compute_metric,
    map_to_image,
    mse,
    psnr,
    rdie_score,
    ssim,
)

__version__ = "0.1.0"

__all__ = [
    "BenchResult",
    "CorrelationReport",
    "DEFAULT_SPEC",
    "DecodeError",
    "DimensionError",
    "DomainError",
    "EngineMismatchError",
    "EntropyMap",
    "ManifestEntry",
    "ManifestError",
    "MetricScore",
    "RdieError",
    "ScoredTable",
    "SweepPoint",
    "UndefinedCorrelationError",
    "WindowError",
    "WindowSpec",
    "aggregate",
    "bench_image",
    "compute_metric",
    "entropy_activation",
    "entropy_map_fast",
    "entropy_map_naive",
    "global_entropy",
    "global_entropy_naive",
    "grid_dims",
    "grid_sweep",
    "load_gray",
    "load_manifest",
    "map_to_image",
    "mse",
    "plcc",
    "psnr",
    "quantize",
    "rdie_score",
    "region_entropy",
    "run_bench",
    "save_gray",
    "score_dataset",
    "srcc",
    "ssim",
    "step_activation",
    "to_grayscale",
]
