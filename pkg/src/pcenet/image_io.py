"""Image loading, saving, resizing and field-of-view masks.

Single source of truth for raster conventions: images are (H, W, 3)
float arrays in [0, 1], square after preprocessing, optionally carrying a
boolean FOV disc mask. Resizing is bilinear with half-pixel centers and is
expressed as a pair of interpolation matrices so the same operator (and its
exact transpose) is reusable by the pyramid and the network.
"""

import functools
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image as PilImage
from PIL import UnidentifiedImageError

from .errors import DimensionError, FormatError, ParameterError

DEFAULT_SIDE = 256
DEFAULT_FOV_RADIUS_FRACTION = 0.97

# PIL modes we refuse outright: 16/32-bit integer, float, CMYK payloads
_REJECTED_MODES = ("I", "I;16", "I;16B", "I;16L", "I;16N", "F", "CMYK")


@dataclass
class Image:
    """An (H, W, 3) float raster in [0, 1] with an optional FOV disc mask."""

    pixels: np.ndarray
    fov_mask: np.ndarray | None = None

    @property
    def side(self) -> int:
        return int(self.pixels.shape[0])

    def validate(self) -> "Image":
        p = self.pixels
        if p.ndim != 3 or p.shape[2] != 3:
            raise DimensionError(f"expected (H, W, 3) pixels, got {p.shape}")
        if p.shape[0] != p.shape[1]:
            raise DimensionError(f"expected a square raster, got {p.shape[:2]}")
        if not np.all(np.isfinite(p)):
            raise FormatError("pixels contain non-finite values")
        if p.min() < 0.0 or p.max() > 1.0:
            raise FormatError("pixels outside [0, 1]")
        if self.fov_mask is not None and self.fov_mask.shape != p.shape[:2]:
            raise DimensionError("fov_mask shape does not match pixels")
        return self


@functools.lru_cache(maxsize=64)
def interp_matrix(n_in: int, n_out: int) -> np.ndarray:
    """(n_out, n_in) bilinear interpolation matrix, half-pixel centers.

    Rows sum to 1 (constants are preserved) and n_in == n_out yields the
    identity, so resizing at the target size is exactly idempotent.
    """
    if n_in < 1 or n_out < 1:
        raise ParameterError("interp_matrix sizes must be >= 1")
    m = np.zeros((n_out, n_in), dtype=np.float64)
    src = (np.arange(n_out, dtype=np.float64) + 0.5) * (n_in / n_out) - 0.5
    src = np.clip(src, 0.0, n_in - 1.0)
    i0 = np.floor(src).astype(np.int64)
    i1 = np.minimum(i0 + 1, n_in - 1)
    w = src - i0
    rows = np.arange(n_out)
    m[rows, i0] += 1.0 - w
    m[rows, i1] += w
    return m


def resize_bilinear(arr: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resize of an (H, W) or (H, W, C) array along its two leading axes."""
    h, w = arr.shape[0], arr.shape[1]
    rm = interp_matrix(h, out_h)
    cm = interp_matrix(w, out_w)
    if arr.dtype != np.float64:
        rm = rm.astype(arr.dtype)
        cm = cm.astype(arr.dtype)
    out = np.tensordot(rm, arr, axes=(1, 0))  # (out_h, W, ...)
    out = np.tensordot(cm, out, axes=(1, 1))  # (out_w, out_h, ...)
    return np.swapaxes(out, 0, 1)


def center_crop_square(arr: np.ndarray) -> np.ndarray:
    """Crop the longer spatial axis to the shorter one, centered."""
    h, w = arr.shape[0], arr.shape[1]
    if h == w:
        return arr
    if h > w:
        top = (h - w) // 2
        return arr[top : top + w]
    left = (w - h) // 2
    return arr[:, left : left + h]


def load_image(path, side: int = DEFAULT_SIDE) -> Image:
    """Load an 8-bit RGB PNG/JPEG as a [0, 1] float image, square at ``side``.

    Non-square inputs are center-cropped to the shorter side before the
    bilinear resize, so the (centered) fundus disc is never distorted.

    Raises FileNotFoundError for missing paths and FormatError for
    unreadable, CMYK or 16-bit payloads.
    """
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"no such image: {p}")
    try:
        pil = PilImage.open(p)
        pil.load()
    except UnidentifiedImageError as exc:
        raise FormatError(f"unreadable image file: {p}") from exc
    except OSError as exc:
        raise FormatError(f"corrupt image file: {p}") from exc
    if pil.mode in _REJECTED_MODES:
        raise FormatError(f"unsupported image mode {pil.mode!r}: {p}")
    if pil.mode != "RGB":
        pil = pil.convert("RGB")
    arr = np.asarray(pil, dtype=np.float64) / 255.0
    arr = center_crop_square(arr)
    if arr.shape[0] != side:
        arr = resize_bilinear(arr, side, side)
    arr = np.clip(arr, 0.0, 1.0)
    return Image(pixels=arr).validate()


def save_image(img: Image, path) -> None:
    """Write an image as an 8-bit RGB file (PNG lossless; JPEG quality 95).

    For PNG, a save/load round trip differs by at most 1/255 per channel.
    """
    img.validate()
    data = np.clip(np.round(img.pixels * 255.0), 0, 255).astype(np.uint8)
    pil = PilImage.fromarray(data, mode="RGB")
    suffix = Path(path).suffix.lower()
    if suffix in (".jpg", ".jpeg"):
        pil.save(path, quality=95)
    else:
        pil.save(path)


def make_fov_mask(side: int, radius_fraction: float = DEFAULT_FOV_RADIUS_FRACTION) -> np.ndarray:
    """Boolean disc mask: True where the distance from the raster center is
    at most radius_fraction * side / 2 (pixel-center convention)."""
    if side < 2:
        raise ParameterError(f"side must be >= 2, got {side}")
    if not 0.0 < radius_fraction <= 1.0:
        raise ParameterError(f"radius_fraction must be in (0, 1], got {radius_fraction}")
    center = (side - 1) / 2.0
    yy = np.arange(side, dtype=np.float64) - center
    d2 = yy[:, None] ** 2 + yy[None, :] ** 2
    radius = radius_fraction * side / 2.0
    return d2 <= radius * radius
