"""Exponential-kernel sums over a monotone grid.

For a nondecreasing coordinate ``z`` and node weights ``w`` the two sums

    left[k]  = sum_{j<k} exp(-(z[k] - z[j])) * w[j]
    right[k] = sum_{j>k} exp(-(z[j] - z[k])) * w[j]

are computed in O(N) with the recurrences

    left[k]  = exp(-(z[k] - z[k-1])) * (left[k-1] + w[k-1])
    right[k] = exp(-(z[k+1] - z[k])) * (right[k+1] + w[k+1]).

Every decay factor is at most one, so partial sums are always expressed
relative to the current node and never overflow, however wide the grid.
``w`` may be two-dimensional (one row per integrand); all rows share the
decay factors.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _left_sweep(z, w):
    m, n = w.shape
    out = np.zeros((m, n))
    for k in range(1, n):
        decay = np.exp(-(z[k] - z[k - 1]))
        for r in range(m):
            out[r, k] = decay * (out[r, k - 1] + w[r, k - 1])
    return out


@njit(cache=True)
def _right_sweep(z, w):
    m, n = w.shape
    out = np.zeros((m, n))
    for k in range(n - 2, -1, -1):
        decay = np.exp(-(z[k + 1] - z[k]))
        for r in range(m):
            out[r, k] = decay * (out[r, k + 1] + w[r, k + 1])
    return out


def _prepare(z, w):
    z = np.ascontiguousarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    flat = w.ndim == 1
    w2 = np.ascontiguousarray(np.atleast_2d(w))
    if w2.shape[1] != z.shape[0]:
        raise ValueError("weights and coordinates differ in length")
    return z, w2, flat


def left_sums(z, w):
    """Strictly-left decayed sums ``sum_{j<k} exp(-(z_k - z_j)) w_j``."""
    z, w2, flat = _prepare(z, w)
    out = _left_sweep(z, w2)
    return out[0] if flat else out


def right_sums(z, w):
    """Strictly-right decayed sums ``sum_{j>k} exp(-(z_j - z_k)) w_j``."""
    z, w2, flat = _prepare(z, w)
    out = _right_sweep(z, w2)
    return out[0] if flat else out


def left_sums_direct(z, w):
    """Quadratic-cost reference for :func:`left_sums`."""
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    gap = z[:, None] - z[None, :]
    mask = np.tril(np.ones_like(gap, dtype=bool), k=-1)
    kern = np.where(mask, np.exp(-np.where(mask, gap, 0.0)), 0.0)
    return w @ kern.T


def right_sums_direct(z, w):
    """Quadratic-cost reference for :func:`right_sums`."""
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    gap = z[None, :] - z[:, None]
    mask = np.triu(np.ones_like(gap, dtype=bool), k=1)
    kern = np.where(mask, np.exp(-np.where(mask, gap, 0.0)), 0.0)
    return w @ kern.T


def split_sums(z, ahead, behind):
    """Integrals of exp(-|z_k - z|) against a measure given cell by cell.

    Cell ``[z_j, z_{j+1}]`` contributes ``ahead[j]`` at its left node and
    ``behind[j+1]`` at its right node (trapezoid-type split).  Returns the
    parts of the integral lying left and right of every node.
    """
    w = np.vstack([ahead, behind])
    left = left_sums(z, w)
    right = right_sums(z, w)
    return left[0] + left[1] + behind, right[0] + right[1] + ahead
