"""Gaussian and Laplacian pyramids.

The smoothing kernel is the classical 5x5 binomial ([1,4,6,4,1]/16 outer
product) with reflect borders, so constant rasters are preserved exactly.
Downsampling smooths then keeps every second row/column; upsampling is the
bilinear resize from :mod:`pcenet.image_io`. Reconstruction inverts the
decomposition to float rounding by construction. This module is the
reference oracle for pyramid math everywhere else in the package.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionError, ParameterError
from .image_io import Image, resize_bilinear

BINOMIAL5 = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0


def _as_hwc(raster: np.ndarray):
    if raster.ndim == 2:
        return raster[:, :, None], True
    if raster.ndim == 3:
        return raster, False
    raise DimensionError(f"expected a 2D or 3D raster, got shape {raster.shape}")


def gaussian_blur(raster: np.ndarray) -> np.ndarray:
    """Separable 5x5 binomial smoothing with reflect borders."""
    arr, squeeze = _as_hwc(np.asarray(raster))
    if min(arr.shape[0], arr.shape[1]) < 5:
        raise DimensionError(f"raster side must be >= 5, got {arr.shape[:2]}")
    out = kernels.sep_filter(np.ascontiguousarray(arr), BINOMIAL5.astype(arr.dtype))
    return out[:, :, 0] if squeeze else out


def downsample(raster: np.ndarray) -> np.ndarray:
    """Smooth-and-decimate by 2: blur, then keep every second row/column."""
    raster = np.asarray(raster)
    if raster.shape[0] % 2 or raster.shape[1] % 2:
        raise DimensionError(f"side must be even to downsample, got {raster.shape[:2]}")
    return gaussian_blur(raster)[::2, ::2]


def upsample(raster: np.ndarray, target_side: int) -> np.ndarray:
    """Bilinear resize back to target_side (must be exactly 2x the input side)."""
    raster = np.asarray(raster)
    if target_side != 2 * raster.shape[0] or raster.shape[0] != raster.shape[1]:
        raise DimensionError(
            f"target_side must be twice the square input side, got {raster.shape[:2]} -> {target_side}"
        )
    return resize_bilinear(raster, target_side, target_side)


@dataclass
class LaplacianStack:
    """Band levels p^0..p^{L-1} plus the low-frequency residual p^L.

    Level l has side base_side / 2^l. Bands may be negative; the residual is
    a smoothed image.
    """

    levels: list
    depth: int
    base_side: int

    def __post_init__(self):
        if len(self.levels) != self.depth + 1:
            raise DimensionError(
                f"expected {self.depth + 1} levels, got {len(self.levels)}"
            )
        for l, lvl in enumerate(self.levels):
            want = self.base_side // (2**l)
            if lvl.shape[0] != want or lvl.shape[1] != want:
                raise DimensionError(
                    f"level {l} has side {lvl.shape[:2]}, expected {want}"
                )

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, i):
        return self.levels[i]


def gaussian_pyramid(raster: np.ndarray, depth: int) -> list:
    """g^0..g^depth via repeated smooth-and-decimate."""
    levels = [np.asarray(raster)]
    for _ in range(depth):
        levels.append(downsample(levels[-1]))
    return levels


def laplacian_decompose(img, depth: int) -> LaplacianStack:
    """Decompose an image (or raw raster) into an L-level band stack.

    p^l = g^l - upsample(g^{l+1}) for l < L, and p^L = g^L.
    """
    raster = img.pixels if isinstance(img, Image) else np.asarray(img)
    if depth < 1:
        raise ParameterError(f"depth must be >= 1, got {depth}")
    side = raster.shape[0]
    if raster.shape[1] != side or side % (2**depth):
        raise DimensionError(
            f"side {raster.shape[:2]} must be square and divisible by 2^{depth}"
        )
    g = gaussian_pyramid(raster, depth)
    levels = [g[l] - upsample(g[l + 1], g[l].shape[0]) for l in range(depth)]
    levels.append(g[depth])
    return LaplacianStack(levels=levels, depth=depth, base_side=side)


def laplacian_reconstruct(stack: LaplacianStack) -> np.ndarray:
    """Invert the decomposition: g^l = p^l + upsample(g^{l+1}), return g^0."""
    current = stack.levels[-1]
    for l in range(stack.depth - 1, -1, -1):
        up = upsample(current, stack.levels[l].shape[0])
        if up.shape != stack.levels[l].shape:
            raise DimensionError("malformed level shapes in stack")
        current = stack.levels[l] + up
    return current
