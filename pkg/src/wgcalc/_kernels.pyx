# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled modular Gauss-Jordan kernels.

Entries are residues in [0, p) with p < 2**31, so every product fits in
a signed 64-bit integer.
"""

import numpy as np
cimport numpy as cnp

ctypedef long long i64


cdef inline i64 _inv(i64 a, i64 p):
    cdef i64 t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def inverse_mod_p(a, long long p):
    """Inverse of a square matrix modulo the prime p, or None if singular."""
    cdef Py_ssize_t n = a.shape[0]
    cdef cnp.ndarray[i64, ndim=2] m = np.zeros((n, 2 * n), dtype=np.int64)
    m[:, :n] = np.mod(np.asarray(a, dtype=np.int64), p)
    cdef i64[:, ::1] w = m
    cdef Py_ssize_t i, j, k, piv
    cdef i64 f, pinv, tmp
    for i in range(n):
        w[i, n + i] = 1
    for k in range(n):
        piv = -1
        for i in range(k, n):
            if w[i, k] != 0:
                piv = i
                break
        if piv < 0:
            return None
        if piv != k:
            for j in range(2 * n):
                tmp = w[k, j]
                w[k, j] = w[piv, j]
                w[piv, j] = tmp
        pinv = _inv(w[k, k], p)
        for j in range(k, 2 * n):
            w[k, j] = (w[k, j] * pinv) % p
        for i in range(n):
            if i == k:
                continue
            f = w[i, k]
            if f == 0:
                continue
            for j in range(k, 2 * n):
                w[i, j] = (w[i, j] - f * w[k, j]) % p
                if w[i, j] < 0:
                    w[i, j] += p
    return np.asarray(m[:, n:]).copy()


def pivot_columns_mod_p(a, long long p):
    """Pivot columns of the reduced row echelon form of a modulo p."""
    cdef cnp.ndarray[i64, ndim=2] m = np.mod(np.asarray(a, dtype=np.int64), p).copy()
    cdef i64[:, ::1] w = m
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef i64 f, pinv, tmp
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if w[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = w[r, j]
                w[r, j] = w[piv, j]
                w[piv, j] = tmp
        pinv = _inv(w[r, c], p)
        for j in range(c, cols):
            w[r, j] = (w[r, j] * pinv) % p
        for i in range(rows):
            if i == r:
                continue
            f = w[i, c]
            if f == 0:
                continue
            for j in range(c, cols):
                w[i, j] = (w[i, j] - f * w[r, j]) % p
                if w[i, j] < 0:
                    w[i, j] += p
        pivots.append(c)
        r += 1
    return pivots
