"""Pure-numpy implementations of the hot kernels.

Every function here has a numba twin in :mod:`pcenet.kernels.numba_impl`
with the same signature and semantics; `pcenet.kernels` picks one pair at
import time (see PCENET_NO_NUMBA). Keep the two files in sync.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def _corr1d_reflect(arr, kernel, axis):
    # mirror padding without edge repeat: [b, a | a b c | c, b]
    r = kernel.shape[0] // 2
    pad = [(r, r) if ax == axis else (0, 0) for ax in range(arr.ndim)]
    padded = np.pad(arr, pad, mode="reflect")
    win = sliding_window_view(padded, kernel.shape[0], axis=axis)
    return win @ kernel


def sep_filter(img, kernel):
    """Separable 2D correlation of an (H, W, C) raster with a 1D kernel.

    Reflect (mirror) border handling on both spatial axes. The kernel is
    applied along rows then columns; symmetric kernels make this equal to
    a full 2D convolution with the outer-product kernel.
    """
    out = _corr1d_reflect(img, kernel, axis=0)
    return _corr1d_reflect(out, kernel, axis=1)


def im2col3x3(x):
    """Lower (N, C, H, W) into patch rows for a 3x3, zero-padded conv.

    Returns (N*H*W, C*9) with column index c*9 + kh*3 + kw, matching
    weight.reshape(F, C*9) for weight of shape (F, C, 3, 3).
    """
    n, c, h, w = x.shape
    xp = np.zeros((n, c, h + 2, w + 2), dtype=x.dtype)
    xp[:, :, 1 : 1 + h, 1 : 1 + w] = x
    cols = np.empty((n, h, w, c, 9), dtype=x.dtype)
    for kh in range(3):
        for kw in range(3):
            cols[..., kh * 3 + kw] = xp[:, :, kh : kh + h, kw : kw + w].transpose(0, 2, 3, 1)
    return cols.reshape(n * h * w, c * 9)


def col2im3x3(cols, n, c, h, w):
    """Adjoint of :func:`im2col3x3`: scatter-add patch rows back to (N, C, H, W)."""
    cols = cols.reshape(n, h, w, c, 9)
    xp = np.zeros((n, c, h + 2, w + 2), dtype=cols.dtype)
    for kh in range(3):
        for kw in range(3):
            xp[:, :, kh : kh + h, kw : kw + w] += cols[..., kh * 3 + kw].transpose(0, 3, 1, 2)
    return xp[:, :, 1 : 1 + h, 1 : 1 + w]


def _cell_bounds(size, grid, i):
    start = (i * size) // grid
    end = -((-(i + 1) * size) // grid)  # ceil((i+1)*size/grid)
    return start, max(end, start + 1)


def adaptive_avg_pool(x, grid):
    """Adaptive average pooling of (N, C, H, W) onto a (grid, grid) output.

    Output cell (i, j) averages rows [floor(i*H/g), ceil((i+1)*H/g)) and the
    analogous column range; grids larger than the input repeat pixels.
    """
    n, c, h, w = x.shape
    out = np.empty((n, c, grid, grid), dtype=x.dtype)
    for i in range(grid):
        r0, r1 = _cell_bounds(h, grid, i)
        for j in range(grid):
            c0, c1 = _cell_bounds(w, grid, j)
            out[:, :, i, j] = x[:, :, r0:r1, c0:c1].mean(axis=(2, 3))
    return out


def adaptive_avg_pool_grad(gout, h, w):
    """Backward of :func:`adaptive_avg_pool` for an (N, C, g, g) output grad."""
    n, c, grid, _ = gout.shape
    gx = np.zeros((n, c, h, w), dtype=gout.dtype)
    for i in range(grid):
        r0, r1 = _cell_bounds(h, grid, i)
        for j in range(grid):
            c0, c1 = _cell_bounds(w, grid, j)
            area = (r1 - r0) * (c1 - c0)
            gx[:, :, r0:r1, c0:c1] += gout[:, :, i, j, None, None] / area
    return gx


def render_spots(h, w, spots):
    """Sum of Gaussian spot fields on an (h, w) canvas.

    ``spots`` is (M, 5) float64 rows [cy, cx, radius, strength, polarity];
    each contributes polarity*strength*exp(-d^2 / (2*(radius/2)^2)).
    """
    field = np.zeros((h, w), dtype=np.float64)
    if spots.shape[0] == 0:
        return field
    yy = np.arange(h, dtype=np.float64)[:, None]
    xx = np.arange(w, dtype=np.float64)[None, :]
    for m in range(spots.shape[0]):
        cy, cx, radius, strength, polarity = spots[m]
        d2 = (yy - cy) ** 2 + (xx - cx) ** 2
        field += polarity * strength * np.exp(-d2 / (2.0 * (radius / 2.0) ** 2))
    return field
