"""Full-reference scores: the entropy-map difference plus pixel-space baselines."""

import math
from dataclasses import dataclass

import numpy as np

from .entropy import (
    DEFAULT_SPEC,
    EntropyMap,
    as_gray,
    entropy_map_fast,
    entropy_map_naive,
)
from .errors import DimensionError, WindowError

ENGINES = ("naive", "fast")
BUILTIN_METRICS = ("rdie", "mse", "psnr", "ssim")
LOWER_IS_BETTER = frozenset({"rdie", "mse"})

SSIM_WINDOW = 8
SSIM_C1 = (0.01 * 255.0) ** 2
SSIM_C2 = (0.03 * 255.0) ** 2


@dataclass(frozen=True)
class MetricScore:
    metric_name: str
    value: float
    higher_is_better: bool


def _map_engine(engine):
    if engine == "naive":
        return entropy_map_naive
    if engine == "fast":
        return entropy_map_fast
    raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")


def _check_same_size(test, ref):
    if test.shape != ref.shape:
        raise DimensionError(
            f"image sizes differ: {test.shape[1]}x{test.shape[0]} vs {ref.shape[1]}x{ref.shape[0]}"
        )


def rdie_score(test, ref, spec=DEFAULT_SPEC, engine="fast") -> MetricScore:
    """Root-mean-square difference between the entropy maps of two images.

    Zero means the maps are identical; the score is symmetric in its
    arguments.  Lower is better.
    """
    compute = _map_engine(engine)
    test = as_gray(test)
    ref = as_gray(ref)
    _check_same_size(test, ref)
    diff = compute(test, spec).values - compute(ref, spec).values
    return MetricScore("rdie", float(np.sqrt(np.mean(diff * diff))), higher_is_better=False)


def mse(test, ref) -> MetricScore:
    """Mean squared pixel difference, intensities treated as reals in [0, 255]."""
    test = as_gray(test)
    ref = as_gray(ref)
    _check_same_size(test, ref)
    diff = test.astype(np.float64) - ref.astype(np.float64)
    return MetricScore("mse", float(np.mean(diff * diff)), higher_is_better=False)


def psnr(test, ref) -> MetricScore:
    """10 * log10(255^2 / MSE) in dB.

    Identical images yield +inf, which sorts above every finite score and
    serializes as the string "inf", keeping rankings total.
    """
    err = mse(test, ref).value
    value = math.inf if err == 0.0 else 10.0 * math.log10(255.0**2 / err)
    return MetricScore("psnr", value, higher_is_better=True)


def ssim(test, ref) -> MetricScore:
    """Mean local structural similarity over 8x8 uniform windows at stride 1.

    Uses the flat-window variant (not Gaussian weighting) with K1 = 0.01,
    K2 = 0.03 and dynamic range 255; cross-library comparisons should expect
    the windowing to differ from Gaussian implementations.
    """
    test = as_gray(test)
    ref = as_gray(ref)
    _check_same_size(test, ref)
    img_h, img_w = test.shape
    if img_h < SSIM_WINDOW or img_w < SSIM_WINDOW:
        raise WindowError(
            f"image of {img_h}x{img_w} pixels is smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} SSIM window"
        )
    n = SSIM_WINDOW * SSIM_WINDOW
    x = test.astype(np.int64)
    y = ref.astype(np.int64)
    mu_x = _ssim_window_sums(x) / n
    mu_y = _ssim_window_sums(y) / n
    var_x = _ssim_window_sums(x * x) / n - mu_x * mu_x
    var_y = _ssim_window_sums(y * y) / n - mu_y * mu_y
    cov = _ssim_window_sums(x * y) / n - mu_x * mu_y
    num = (2.0 * mu_x * mu_y + SSIM_C1) * (2.0 * cov + SSIM_C2)
    den = (mu_x * mu_x + mu_y * mu_y + SSIM_C1) * (var_x + var_y + SSIM_C2)
    return MetricScore("ssim", float(np.mean(num / den)), higher_is_better=True)


def _ssim_window_sums(a):
    """Sums over all 8x8 windows at stride 1, exact in int64."""
    sat = np.zeros((a.shape[0] + 1, a.shape[1] + 1), dtype=np.int64)
    sat[1:, 1:] = a.cumsum(axis=0, dtype=np.int64).cumsum(axis=1)
    k = SSIM_WINDOW
    return sat[k:, k:] - sat[:-k, k:] - sat[k:, :-k] + sat[:-k, :-k]


def map_to_image(emap: EntropyMap) -> np.ndarray:
    """Render an entropy map as an 8-bit image, one pixel per region.

    Values are scaled linearly from [0, max attainable entropy] to [0, 255].
    """
    peak = emap.spec.max_entropy
    if peak <= 0.0:
        return np.zeros(emap.values.shape, dtype=np.uint8)
    scaled = np.rint(emap.values * (255.0 / peak))
    return np.clip(scaled, 0.0, 255.0).astype(np.uint8)


def compute_metric(name, test, ref, spec=DEFAULT_SPEC, engine="fast") -> MetricScore:
    """Dispatch one of the built-in metrics by name."""
    if name == "rdie":
        return rdie_score(test, ref, spec, engine)
    if name == "mse":
        return mse(test, ref)
    if name == "psnr":
        return psnr(test, ref)
    if name == "ssim":
        return ssim(test, ref)
    raise ValueError(f"unknown metric {name!r}; built-ins are {BUILTIN_METRICS}")


def higher_is_better(name) -> bool:
    """Orientation of a metric by name; unknown (external) names count as higher-better."""
    return name not in LOWER_IS_BETTER
