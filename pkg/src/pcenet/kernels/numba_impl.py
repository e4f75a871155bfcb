"""Numba-jitted twins of the kernels in :mod:`pcenet.kernels.numpy_impl`.

Same signatures, same semantics, no fastmath (results must track the numpy
path to float rounding). Compiled lazily per dtype; cache=True persists the
machine code next to the package.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _reflect(idx, n):
    # mirror without edge repeat, valid for any offset magnitude
    while idx < 0 or idx >= n:
        if idx < 0:
            idx = -idx
        if idx >= n:
            idx = 2 * n - 2 - idx
    return idx


@njit(cache=True)
def sep_filter(img, kernel):
    h, w, c = img.shape
    k = kernel.shape[0]
    r = k // 2
    tmp = np.empty_like(img)
    out = np.empty_like(img)
    # rows
    for i in range(h):
        for j in range(w):
            for ch in range(c):
                acc = 0.0
                for t in range(k):
                    acc += kernel[t] * img[_reflect(i + t - r, h), j, ch]
                tmp[i, j, ch] = acc
    # columns
    for i in range(h):
        for j in range(w):
            for ch in range(c):
                acc = 0.0
                for t in range(k):
                    acc += kernel[t] * tmp[i, _reflect(j + t - r, w), ch]
                out[i, j, ch] = acc
    return out


@njit(cache=True)
def im2col3x3(x):
    n, c, h, w = x.shape
    cols = np.zeros((n * h * w, c * 9), dtype=x.dtype)
    for b in range(n):
        for i in range(h):
            for j in range(w):
                row = (b * h + i) * w + j
                for ch in range(c):
                    base = ch * 9
                    for kh in range(3):
                        ii = i + kh - 1
                        if ii < 0 or ii >= h:
                            continue
                        for kw in range(3):
                            jj = j + kw - 1
                            if 0 <= jj < w:
                                cols[row, base + kh * 3 + kw] = x[b, ch, ii, jj]
    return cols


@njit(cache=True)
def col2im3x3(cols, n, c, h, w):
    gx = np.zeros((n, c, h, w), dtype=cols.dtype)
    for b in range(n):
        for i in range(h):
            for j in range(w):
                row = (b * h + i) * w + j
                for ch in range(c):
                    base = ch * 9
                    for kh in range(3):
                        ii = i + kh - 1
                        if ii < 0 or ii >= h:
                            continue
                        for kw in range(3):
                            jj = j + kw - 1
                            if 0 <= jj < w:
                                gx[b, ch, ii, jj] += cols[row, base + kh * 3 + kw]
    return gx


@njit(cache=True)
def adaptive_avg_pool(x, grid):
    n, c, h, w = x.shape
    out = np.empty((n, c, grid, grid), dtype=x.dtype)
    for i in range(grid):
        r0 = (i * h) // grid
        r1 = -((-(i + 1) * h) // grid)
        if r1 <= r0:
            r1 = r0 + 1
        for j in range(grid):
            c0 = (j * w) // grid
            c1 = -((-(j + 1) * w) // grid)
            if c1 <= c0:
                c1 = c0 + 1
            area = (r1 - r0) * (c1 - c0)
            for b in range(n):
                for ch in range(c):
                    acc = 0.0
                    for ii in range(r0, r1):
                        for jj in range(c0, c1):
                            acc += x[b, ch, ii, jj]
                    out[b, ch, i, j] = acc / area
    return out


@njit(cache=True)
def adaptive_avg_pool_grad(gout, h, w):
    n, c, grid, _ = gout.shape
    gx = np.zeros((n, c, h, w), dtype=gout.dtype)
    for i in range(grid):
        r0 = (i * h) // grid
        r1 = -((-(i + 1) * h) // grid)
        if r1 <= r0:
            r1 = r0 + 1
        for j in range(grid):
            c0 = (j * w) // grid
            c1 = -((-(j + 1) * w) // grid)
            if c1 <= c0:
                c1 = c0 + 1
            area = (r1 - r0) * (c1 - c0)
            for b in range(n):
                for ch in range(c):
                    g = gout[b, ch, i, j] / area
                    for ii in range(r0, r1):
                        for jj in range(c0, c1):
                            gx[b, ch, ii, jj] += g
    return gx


@njit(cache=True)
def render_spots(h, w, spots):
    field = np.zeros((h, w), dtype=np.float64)
    for m in range(spots.shape[0]):
        cy = spots[m, 0]
        cx = spots[m, 1]
        radius = spots[m, 2]
        strength = spots[m, 3]
        polarity = spots[m, 4]
        denom = 2.0 * (radius / 2.0) ** 2
        for i in range(h):
            dy2 = (i - cy) ** 2
            for j in range(w):
                d2 = dy2 + (j - cx) ** 2
                field[i, j] += polarity * strength * np.exp(-d2 / denom)
    return field
