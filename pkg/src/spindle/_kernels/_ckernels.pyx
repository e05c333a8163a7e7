# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hull kernels.

Must stay operation-for-operation identical to ``_pykernels`` so that both
backends return the same vertex sequences.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt
from libc.stdlib cimport malloc, free, qsort

cnp.import_array()

ctypedef struct PtIdx:
    double x
    double y
    Py_ssize_t i


cdef int _cmp_lex(const void* pa, const void* pb) noexcept nogil:
    cdef const PtIdx* a = <const PtIdx*> pa
    cdef const PtIdx* b = <const PtIdx*> pb
    if a.x < b.x:
        return -1
    if a.x > b.x:
        return 1
    if a.y < b.y:
        return -1
    if a.y > b.y:
        return 1
    if a.i < b.i:
        return -1
    if a.i > b.i:
        return 1
    return 0


cdef inline double _cross(double ox, double oy, double ax, double ay, double bx, double by) noexcept nogil:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def linear_hull(double[:, ::1] xy):
    """Indices of the strictly convex hull vertices, ccw from the lexicographic minimum."""
    cdef Py_ssize_t n = xy.shape[0]
    cdef Py_ssize_t i, j, k, m, nk, lo_len
    cdef double px, py, v, best[8]
    cdef Py_ssize_t ext[8]
    cdef double ex[8]
    cdef double ey[8]
    cdef bint keep
    if n == 0:
        return np.zeros(0, dtype=np.intp)
    # octagon of extreme points in directions 0, 45, ..., 315 degrees (ccw)
    for j in range(8):
        ext[j] = 0
    best[0] = xy[0, 0]
    best[1] = xy[0, 0] + xy[0, 1]
    best[2] = xy[0, 1]
    best[3] = xy[0, 1] - xy[0, 0]
    best[4] = -xy[0, 0]
    best[5] = -xy[0, 0] - xy[0, 1]
    best[6] = -xy[0, 1]
    best[7] = xy[0, 0] - xy[0, 1]
    for i in range(1, n):
        px = xy[i, 0]
        py = xy[i, 1]
        v = px
        if v > best[0]:
            best[0] = v; ext[0] = i
        v = px + py
        if v > best[1]:
            best[1] = v; ext[1] = i
        v = py
        if v > best[2]:
            best[2] = v; ext[2] = i
        v = py - px
        if v > best[3]:
            best[3] = v; ext[3] = i
        v = -px
        if v > best[4]:
            best[4] = v; ext[4] = i
        v = -px - py
        if v > best[5]:
            best[5] = v; ext[5] = i
        v = -py
        if v > best[6]:
            best[6] = v; ext[6] = i
        v = px - py
        if v > best[7]:
            best[7] = v; ext[7] = i
    for j in range(8):
        ex[j] = xy[ext[j], 0]
        ey[j] = xy[ext[j], 1]

    cdef PtIdx* buf = <PtIdx*> malloc(n * sizeof(PtIdx))
    cdef Py_ssize_t* hull = <Py_ssize_t*> malloc((2 * n + 2) * sizeof(Py_ssize_t))
    if buf == NULL or hull == NULL:
        free(buf)
        free(hull)
        raise MemoryError()
    try:
        nk = 0
        for i in range(n):
            px = xy[i, 0]
            py = xy[i, 1]
            keep = False
            for j in range(8):
                k = (j + 1) % 8
                if _cross(ex[j], ey[j], ex[k], ey[k], px, py) <= 0.0:
                    keep = True
                    break
            if keep:
                buf[nk].x = px
                buf[nk].y = py
                buf[nk].i = i
                nk += 1
        qsort(buf, nk, sizeof(PtIdx), _cmp_lex)
        # drop exact duplicates (keep the first index)
        m = 0
        for i in range(nk):
            if m > 0 and buf[i].x == buf[m - 1].x and buf[i].y == buf[m - 1].y:
                continue
            buf[m] = buf[i]
            m += 1
        if m <= 2:
            return np.array([buf[i].i for i in range(m)], dtype=np.intp)
        k = 0
        for i in range(m):
            while k >= 2 and _cross(buf[hull[k - 2]].x, buf[hull[k - 2]].y,
                                    buf[hull[k - 1]].x, buf[hull[k - 1]].y,
                                    buf[i].x, buf[i].y) <= 0.0:
                k -= 1
            hull[k] = i
            k += 1
        lo_len = k + 1
        i = m - 2
        while i >= 0:
            while k >= lo_len and _cross(buf[hull[k - 2]].x, buf[hull[k - 2]].y,
                                         buf[hull[k - 1]].x, buf[hull[k - 1]].y,
                                         buf[i].x, buf[i].y) <= 0.0:
                k -= 1
            hull[k] = i
            k += 1
            i -= 1
        out = np.empty(k - 1, dtype=np.intp)
        for j in range(k - 1):
            out[j] = buf[hull[j]].i
        return out
    finally:
        free(buf)
        free(hull)


cdef inline bint _spindle_contains(double ax, double ay, double bx, double by,
                                   double px, double py, double r, double tol) noexcept nogil:
    cdef double dx = bx - ax, dy = by - ay
    cdef double d = sqrt(dx * dx + dy * dy)
    cdef double h, mx, my, nx, ny, cx, cy, qx, qy
    if d == 0.0:
        qx = px - ax
        qy = py - ay
        return sqrt(qx * qx + qy * qy) <= tol
    h = r * r - 0.25 * d * d
    h = sqrt(h) if h > 0.0 else 0.0
    mx = 0.5 * (ax + bx)
    my = 0.5 * (ay + by)
    nx = -dy / d
    ny = dx / d
    cx = mx + h * nx
    cy = my + h * ny
    qx = px - cx
    qy = py - cy
    if sqrt(qx * qx + qy * qy) > r + tol:
        return False
    cx = mx - h * nx
    cy = my - h * ny
    qx = px - cx
    qy = py - cy
    return sqrt(qx * qx + qy * qy) <= r + tol


def spindle_contains_xy(double ax, double ay, double bx, double by,
                        double px, double py, double r, double tol):
    return _spindle_contains(ax, ay, bx, by, px, py, r, tol)


def prune_r_hull(double[:, ::1] xy, Py_ssize_t[::1] idx, double r, double tol):
    """Delete hull vertices lying in the r-spindle of their two neighbours until stable."""
    cdef Py_ssize_t m = idx.shape[0]
    cdef Py_ssize_t i, a, c, count, clean, start
    if m <= 2:
        return np.asarray(idx).copy()
    nxt_arr = np.empty(m, dtype=np.intp)
    prv_arr = np.empty(m, dtype=np.intp)
    alive_arr = np.ones(m, dtype=np.uint8)
    cdef Py_ssize_t[::1] nxt = nxt_arr
    cdef Py_ssize_t[::1] prv = prv_arr
    cdef unsigned char[::1] alive = alive_arr
    for i in range(m):
        nxt[i] = (i + 1) % m
        prv[i] = (i - 1 + m) % m
    count = m
    clean = 0
    i = 0
    while count >= 3 and clean < count:
        a = prv[i]
        c = nxt[i]
        if _spindle_contains(xy[idx[a], 0], xy[idx[a], 1], xy[idx[c], 0], xy[idx[c], 1],
                             xy[idx[i], 0], xy[idx[i], 1], r, tol):
            nxt[a] = c
            prv[c] = a
            alive[i] = 0
            count -= 1
            clean = 0
            i = a
        else:
            clean += 1
            i = c
    start = 0
    while not alive[start]:
        start += 1
    out = np.empty(count, dtype=np.intp)
    i = start
    for a in range(count):
        out[a] = idx[i]
        i = nxt[i]
    return out
