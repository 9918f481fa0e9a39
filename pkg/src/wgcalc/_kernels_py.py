"""Fallback modular Gauss-Jordan kernels (numpy row operations).

Same contract as the compiled ``_kernels`` module.
"""

from __future__ import annotations

import numpy as np


def inverse_mod_p(a, p: int):
    """Inverse of a square matrix modulo the prime p, or None if singular."""
    a = np.mod(np.asarray(a, dtype=np.int64), p)
    n = a.shape[0]
    w = np.zeros((n, 2 * n), dtype=np.int64)
    w[:, :n] = a
    w[np.arange(n), n + np.arange(n)] = 1
    for k in range(n):
        nz = np.nonzero(w[k:, k])[0]
        if nz.size == 0:
            return None
        piv = k + int(nz[0])
        if piv != k:
            w[[k, piv]] = w[[piv, k]]
        w[k, k:] = (w[k, k:] * pow(int(w[k, k]), -1, p)) % p
        f = w[:, k].copy()
        f[k] = 0
        rows = np.nonzero(f)[0]
        if rows.size:
            w[np.ix_(rows, np.arange(k, 2 * n))] = (
                w[np.ix_(rows, np.arange(k, 2 * n))] - np.outer(f[rows], w[k, k:])
            ) % p
    return w[:, n:].copy()


def pivot_columns_mod_p(a, p: int) -> list[int]:
    """Pivot columns of the reduced row echelon form of a modulo p."""
    w = np.mod(np.asarray(a, dtype=np.int64), p).copy()
    rows, cols = w.shape
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(w[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            w[[r, piv]] = w[[piv, r]]
        w[r, c:] = (w[r, c:] * pow(int(w[r, c]), -1, p)) % p
        f = w[:, c].copy()
        f[r] = 0
        idx = np.nonzero(f)[0]
        if idx.size:
            w[np.ix_(idx, np.arange(c, cols))] = (
                w[np.ix_(idx, np.arange(c, cols))] - np.outer(f[idx], w[r, c:])
            ) % p
        pivots.append(c)
        r += 1
    return pivots
