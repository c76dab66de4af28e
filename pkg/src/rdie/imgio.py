"""PNG loading and saving for 8-bit grayscale pipelines."""

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .entropy import to_grayscale
from .errors import DecodeError


def load_gray(path, gray_mode="luma") -> np.ndarray:
    """Decode an 8-bit grayscale or RGB PNG into a 2-D uint8 array.

    Other containers, 16-bit depths, palettes and alpha channels are rejected
    rather than silently converted.
    """
    path = Path(path)
    try:
        with Image.open(path) as im:
            if im.format != "PNG":
                raise DecodeError(
                    f"{path}: only PNG input is supported, got {im.format or 'unknown format'}"
                )
            if im.mode == "L":
                return np.asarray(im, dtype=np.uint8)
            if im.mode == "RGB":
                return to_grayscale(np.asarray(im, dtype=np.uint8), gray_mode)
            raise DecodeError(
                f"{path}: unsupported PNG mode {im.mode!r}; "
                "only 8-bit grayscale or RGB without alpha is accepted"
            )
    except FileNotFoundError:
        raise DecodeError(f"{path}: no such file") from None
    except UnidentifiedImageError:
        raise DecodeError(f"{path}: not a decodable image") from None
    except OSError as exc:
        raise DecodeError(f"{path}: {exc}") from exc


def save_gray(path, array) -> None:
    """Write a 2-D uint8 array as a grayscale PNG."""
    arr = np.ascontiguousarray(array, dtype=np.uint8)
    Image.fromarray(arr, mode="L").save(Path(path), format="PNG")
