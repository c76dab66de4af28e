"""Quantized regional entropy maps over 8-bit grayscale images.

Pixels are binned into ``levels`` equal-width gray bins (bin ``l`` covers
``[l*256/levels, (l+1)*256/levels)``, so every pixel belongs to exactly one
bin and the per-window level probabilities always sum to 1).  Each sliding
window position then contributes one entropy value, in bits, to a 2-D map.

Two engines produce the map: :func:`entropy_map_naive` visits every window
serially and is the reference, while :func:`entropy_map_fast` treats each
gray level as a separate channel and counts all windows at once with array
arithmetic.  The two agree elementwise to well below 1e-9.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, WindowError

GRAY_MODES = ("luma", "channel_mean")


@dataclass(frozen=True)
class WindowSpec:
    """Sliding-window parameters: window size, stride, and quantization levels."""

    win_h: int = 5
    win_w: int = 5
    stride: int = 5
    levels: int = 32

    def __post_init__(self):
        if self.win_h < 1 or self.win_w < 1:
            raise ValueError(f"window must be at least 1x1, got {self.win_h}x{self.win_w}")
        if self.stride < 1:
            raise ValueError(f"stride must be at least 1, got {self.stride}")
        if not 2 <= self.levels <= 256:
            raise ValueError(f"levels must be in [2, 256], got {self.levels}")

    @classmethod
    def square(cls, window, levels=32, stride=None):
        """Square window; stride defaults to the window size."""
        return cls(window, window, window if stride is None else stride, levels)

    @property
    def window_area(self):
        return self.win_h * self.win_w

    @property
    def max_entropy(self):
        """Largest entropy any window can attain: log2(min(levels, window area))."""
        return math.log2(min(self.levels, self.window_area))


DEFAULT_SPEC = WindowSpec(5, 5, 5, 32)


@dataclass(frozen=True)
class EntropyMap:
    """Per-region entropies in bits, one cell per window position."""

    values: np.ndarray
    spec: WindowSpec

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.size == 0:
            raise DimensionError(f"entropy map must be a non-empty 2-D array, got shape {values.shape}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def rows(self):
        return self.values.shape[0]

    @property
    def cols(self):
        return self.values.shape[1]


def _check_levels(levels):
    if not 2 <= levels <= 256:
        raise ValueError(f"levels must be in [2, 256], got {levels}")


def as_gray(img) -> np.ndarray:
    """Validate a 2-D 8-bit intensity array, casting integer inputs to uint8."""
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"expected a non-empty 2-D grayscale array, got shape {arr.shape}")
    if arr.dtype == np.uint8:
        return arr
    if not np.issubdtype(arr.dtype, np.integer):
        raise DomainError(f"pixel array must have an integer dtype, got {arr.dtype}")
    if arr.min() < 0 or arr.max() > 255:
        raise DomainError("pixel values must lie in [0, 255]")
    return arr.astype(np.uint8)


def to_grayscale(rgb, mode="luma") -> np.ndarray:
    """Collapse an HxWx3 8-bit image to one gray plane.

    ``luma`` weights the channels 0.299/0.587/0.114; ``channel_mean`` averages
    them equally.  Results are rounded and clamped to [0, 255].
    """
    arr = np.asarray(rgb)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise DimensionError(f"expected an HxWx3 color array, got shape {arr.shape}")
    channels = arr.astype(np.float64)
    if mode == "luma":
        gray = 0.299 * channels[..., 0] + 0.587 * channels[..., 1] + 0.114 * channels[..., 2]
    elif mode == "channel_mean":
        gray = (channels[..., 0] + channels[..., 1] + channels[..., 2]) / 3.0
    else:
        raise ValueError(f"unknown grayscale mode {mode!r}; expected one of {GRAY_MODES}")
    return np.clip(np.rint(gray), 0, 255).astype(np.uint8)


def quantize(img, levels) -> np.ndarray:
    """Map 8-bit intensities onto ``levels`` equal-width bins.

    level = floor(pixel * levels / 256), so levels == 256 is the identity and
    every level in [0, levels - 1] is reachable.
    """
    _check_levels(levels)
    arr = as_gray(img)
    return ((arr.astype(np.int32) * levels) >> 8).astype(np.uint8)


def step_activation(x, levels):
    """1 where 0 <= x < 256/levels, else 0.

    The upper edge is excluded so that shifting by multiples of the bin width
    one-hots each pixel into exactly one level.
    """
    _check_levels(levels)
    arr = np.asarray(x, dtype=np.float64)
    out = ((arr >= 0.0) & (arr < 256.0 / levels)).astype(np.float64)
    return float(out) if out.ndim == 0 else out


def entropy_activation(x):
    """-x * log2(x) in bits, with the x == 0 branch defined as exactly 0."""
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise DomainError("probabilities must lie in [0, 1]")
    out = np.zeros_like(arr)
    nz = arr > 0.0
    out[nz] = -arr[nz] * np.log2(arr[nz])
    return float(out[0]) if scalar else out


def grid_dims(img_h, img_w, spec):
    """Count of full window positions per axis; trailing pixels are dropped."""
    if img_h < spec.win_h or img_w < spec.win_w:
        raise WindowError(
            f"image of {img_h}x{img_w} pixels is smaller than the {spec.win_h}x{spec.win_w} window"
        )
    rows = (img_h - spec.win_h) // spec.stride + 1
    cols = (img_w - spec.win_w) // spec.stride + 1
    return rows, cols


def region_entropy(q, x0, y0, spec):
    """Entropy in bits of the level histogram of one window.

    ``q`` is a quantized image; the window spans rows [y0, y0 + win_h) and
    columns [x0, x0 + win_w).
    """
    arr = np.asarray(q)
    img_h, img_w = arr.shape
    if x0 < 0 or y0 < 0 or y0 + spec.win_h > img_h or x0 + spec.win_w > img_w:
        raise WindowError(
            f"{spec.win_h}x{spec.win_w} window at ({x0}, {y0}) exceeds the {img_h}x{img_w} image"
        )
    window = arr[y0 : y0 + spec.win_h, x0 : x0 + spec.win_w]
    counts = np.bincount(window.ravel(), minlength=spec.levels)
    probs = counts / float(spec.window_area)
    nz = probs[probs > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def entropy_map_naive(img, spec) -> EntropyMap:
    """Reference engine: one histogram per window, visited serially."""
    arr = as_gray(img)
    rows, cols = grid_dims(arr.shape[0], arr.shape[1], spec)
    q = quantize(arr, spec.levels)
    values = np.empty((rows, cols), dtype=np.float64)
    for r in range(rows):
        for c in range(cols):
            values[r, c] = region_entropy(q, c * spec.stride, r * spec.stride, spec)
    return EntropyMap(values, spec)


def entropy_map_fast(img, spec) -> EntropyMap:
    """Parallel engine, equal to :func:`entropy_map_naive` within 1e-9.

    Each gray level acts as its own counting channel and regions are split
    across threads in a compiled kernel, so all windows are histogrammed in
    one pass over the image.  Per-count entropy contributions come from a
    precomputed table shared with no cross-thread accumulation, which keeps
    the output deterministic regardless of thread count.
    """
    arr = as_gray(img)
    rows, cols = grid_dims(arr.shape[0], arr.shape[1], spec)
    kernel = _window_entropy_kernel()
    values = kernel(
        np.ascontiguousarray(arr), rows, cols,
        spec.win_h, spec.win_w, spec.stride, spec.levels,
        _count_entropy_table(spec),
    )
    return EntropyMap(values, spec)


def _count_entropy_table(spec):
    """Entropy contribution -p*log2(p) for every possible window count."""
    counts = np.arange(spec.window_area + 1, dtype=np.float64)
    probs = counts / counts[-1]
    table = np.zeros_like(probs)
    nz = probs > 0.0
    table[nz] = -probs[nz] * np.log2(probs[nz])
    return table


def _window_entropy_kernel():
    """Deferred import so the compiler is only loaded when the fast engine runs."""
    from ._kernels import window_entropy

    return window_entropy


def global_entropy(img, levels) -> float:
    """Entropy in bits of the whole-image quantized histogram.

    Equals a one-cell entropy map whose window, stride and image coincide.
    """
    _check_levels(levels)
    arr = as_gray(img)
    counts = np.bincount(quantize(arr, levels).ravel(), minlength=levels)
    probs = counts / float(arr.size)
    nz = probs[probs > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def global_entropy_naive(img, levels) -> float:
    """Serial reference for :func:`global_entropy`: per-pixel accumulation."""
    _check_levels(levels)
    arr = as_gray(img)
    hist = [0] * levels
    for value in arr.ravel().tolist():
        hist[(value * levels) >> 8] += 1
    total = arr.size
    acc = 0.0
    for count in hist:
        if count:
            p = count / total
            acc -= p * math.log2(p)
    return acc
