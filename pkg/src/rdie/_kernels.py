"""Compiled window-entropy kernel.

Imported lazily by :mod:`rdie.entropy` so that loading the package does not
pay for the compiler; the first fast-engine call in a fresh environment
triggers compilation, after which the binary is cached on disk.
"""

import numpy as np
from numba import njit, prange


@njit(parallel=True, cache=True)
def window_entropy(pixels, rows, cols, win_h, win_w, stride, levels, table):
    """Entropy of every window's level histogram, regions split across threads.

    Pixels are binned inline with the same floor(p * levels / 256) rule as
    the standalone quantizer; ``table[c]`` is the entropy contribution of a
    level seen ``c`` times in one window.  Each region is counted by exactly
    one thread, so results do not depend on thread count.
    """
    out = np.empty((rows, cols), dtype=np.float64)
    for r in prange(rows):
        hist = np.zeros(levels, dtype=np.int64)
        y0 = r * stride
        for c in range(cols):
            x0 = c * stride
            for level in range(levels):
                hist[level] = 0
            for y in range(y0, y0 + win_h):
                for x in range(x0, x0 + win_w):
                    hist[(pixels[y, x] * levels) >> 8] += 1
            acc = 0.0
            for level in range(levels):
                acc += table[hist[level]]
            out[r, c] = acc
    return out
