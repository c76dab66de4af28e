import numpy as np
import pytest
from PIL import Image


@pytest.fixture
def write_png(tmp_path):
    """Write an array (2-D gray or HxWx3 RGB) as a PNG and return its path."""

    def _write(name, array):
        arr = np.asarray(array, dtype=np.uint8)
        path = tmp_path / name
        Image.fromarray(arr, mode="L" if arr.ndim == 2 else "RGB").save(path, format="PNG")
        return path

    return _write


def stripe_image(height, width, values, band=1):
    """Vertical stripes cycling through ``values``, each ``band`` columns wide."""
    cols = np.arange(width) // band % len(values)
    row = np.asarray(values, dtype=np.uint8)[cols]
    return np.tile(row, (height, 1))
