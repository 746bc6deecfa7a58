# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled numerical kernels.

Same contract as `wavelasso._kernels_py`; see that module for semantics.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport copysign, fabs, fmax, sqrt

cnp.import_array()

cdef double SQRT2 = sqrt(2.0)


def haar1d_forward(x, int levels):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.array(x, dtype=np.float64, copy=True)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tmp = np.empty(out.shape[0], dtype=np.float64)
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t active, half, i
    cdef int lvl
    for lvl in range(levels):
        active = n >> lvl
        half = active >> 1
        for i in range(half):
            tmp[i] = (out[2 * i] + out[2 * i + 1]) / SQRT2
            tmp[half + i] = (out[2 * i] - out[2 * i + 1]) / SQRT2
        for i in range(active):
            out[i] = tmp[i]
    return out


def haar1d_inverse(c, int levels):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.array(c, dtype=np.float64, copy=True)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tmp = np.empty(out.shape[0], dtype=np.float64)
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t active, half, i
    cdef int lvl
    for lvl in range(levels - 1, -1, -1):
        active = n >> lvl
        half = active >> 1
        for i in range(half):
            tmp[2 * i] = (out[i] + out[half + i]) / SQRT2
            tmp[2 * i + 1] = (out[i] - out[half + i]) / SQRT2
        for i in range(active):
            out[i] = tmp[i]
    return out


def haar2d_forward(a, int levels):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.array(a, dtype=np.float64, copy=True)
    cdef Py_ssize_t rows = out.shape[0]
    cdef Py_ssize_t cols = out.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tmp = np.empty(max(rows, cols), dtype=np.float64)
    cdef Py_ssize_t h, w, half, r, cc, i
    cdef int lvl
    for lvl in range(levels):
        h = rows >> lvl
        w = cols >> lvl
        half = w >> 1
        for r in range(h):
            for i in range(half):
                tmp[i] = (out[r, 2 * i] + out[r, 2 * i + 1]) / SQRT2
                tmp[half + i] = (out[r, 2 * i] - out[r, 2 * i + 1]) / SQRT2
            for i in range(w):
                out[r, i] = tmp[i]
        half = h >> 1
        for cc in range(w):
            for i in range(half):
                tmp[i] = (out[2 * i, cc] + out[2 * i + 1, cc]) / SQRT2
                tmp[half + i] = (out[2 * i, cc] - out[2 * i + 1, cc]) / SQRT2
            for i in range(h):
                out[i, cc] = tmp[i]
    return out


def haar2d_inverse(p, int levels):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.array(p, dtype=np.float64, copy=True)
    cdef Py_ssize_t rows = out.shape[0]
    cdef Py_ssize_t cols = out.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tmp = np.empty(max(rows, cols), dtype=np.float64)
    cdef Py_ssize_t h, w, half, r, cc, i
    cdef int lvl
    for lvl in range(levels - 1, -1, -1):
        h = rows >> lvl
        w = cols >> lvl
        half = h >> 1
        for cc in range(w):
            for i in range(half):
                tmp[2 * i] = (out[i, cc] + out[half + i, cc]) / SQRT2
                tmp[2 * i + 1] = (out[i, cc] - out[half + i, cc]) / SQRT2
            for i in range(h):
                out[i, cc] = tmp[i]
        half = w >> 1
        for r in range(h):
            for i in range(half):
                tmp[2 * i] = (out[r, i] + out[r, half + i]) / SQRT2
                tmp[2 * i + 1] = (out[r, i] - out[r, half + i]) / SQRT2
            for i in range(w):
                out[r, i] = tmp[i]
    return out


def soft_threshold(v, double t):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(vv.shape[0], dtype=np.float64)
    cdef Py_ssize_t i, n = vv.shape[0]
    cdef double x
    for i in range(n):
        x = vv[i]
        out[i] = copysign(fmax(fabs(x) - t, 0.0), x)
    return out


def group_shrink(v, starts, lens, double t):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] st = np.ascontiguousarray(starts, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ln = np.ascontiguousarray(lens, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(vv.shape[0], dtype=np.float64)
    cdef Py_ssize_t g, i, s, l, ngroups = st.shape[0]
    cdef double nrm, factor
    for g in range(ngroups):
        s = st[g]
        l = ln[g]
        nrm = 0.0
        for i in range(s, s + l):
            nrm += vv[i] * vv[i]
        nrm = sqrt(nrm)
        if nrm > t:
            factor = 1.0 - t / nrm
            for i in range(s, s + l):
                out[i] = factor * vv[i]
        else:
            for i in range(s, s + l):
                out[i] = 0.0
    return out


def group_norm_sum(v, starts, lens):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] st = np.ascontiguousarray(starts, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ln = np.ascontiguousarray(lens, dtype=np.int64)
    cdef Py_ssize_t g, i, s, l, ngroups = st.shape[0]
    cdef double nrm, total = 0.0
    for g in range(ngroups):
        s = st[g]
        l = ln[g]
        nrm = 0.0
        for i in range(s, s + l):
            nrm += vv[i] * vv[i]
        total += sqrt(nrm)
    return total


def conv2d_circular(img, taps):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] im = np.ascontiguousarray(img, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] kk = np.ascontiguousarray(taps, dtype=np.float64)
    cdef Py_ssize_t rows = im.shape[0]
    cdef Py_ssize_t cols = im.shape[1]
    cdef Py_ssize_t kh = kk.shape[0]
    cdef Py_ssize_t kw = kk.shape[1]
    cdef Py_ssize_t kr = kh // 2
    cdef Py_ssize_t kc = kw // 2
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((rows, cols), dtype=np.float64)
    cdef Py_ssize_t i, j, u, w, si, sc
    cdef double tap
    # accumulate one shifted copy per tap; column wrap handled by two
    # contiguous segments so the inner loops vectorize
    for u in range(kh):
        for w in range(kw):
            tap = kk[u, w]
            if tap == 0.0:
                continue
            sc = (w - kc + cols) % cols
            for i in range(rows):
                si = (i - (u - kr) + rows) % rows
                for j in range(sc):
                    out[i, j] += tap * im[si, cols - sc + j]
                for j in range(sc, cols):
                    out[i, j] += tap * im[si, j - sc]
    return out
