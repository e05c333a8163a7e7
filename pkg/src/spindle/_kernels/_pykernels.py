"""Pure-Python/numpy hull kernels; reference twin of ``_ckernels``."""
import math

import numpy as np

# support directions 0, 45, ..., 315 degrees, unnormalized
_DIRS = np.array([[1, 0], [1, 1], [0, 1], [-1, 1], [-1, 0], [-1, -1], [0, -1], [1, -1]], dtype=float)


def _cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def linear_hull(xy):
    """Indices of the strictly convex hull vertices, ccw from the lexicographic minimum."""
    xy = np.ascontiguousarray(xy, dtype=float)
    n = len(xy)
    if n == 0:
        return np.zeros(0, dtype=np.intp)
    x, y = xy[:, 0], xy[:, 1]
    proj = np.stack([x, x + y, y, y - x, -x, -x - y, -y, x - y])
    ext = np.argmax(proj, axis=1)
    ex, ey = x[ext], y[ext]
    keep = np.zeros(n, dtype=bool)
    for j in range(8):
        k = (j + 1) % 8
        keep |= _cross(ex[j], ey[j], ex[k], ey[k], x, y) <= 0.0
    cand = np.flatnonzero(keep)
    pts = sorted(zip(x[cand].tolist(), y[cand].tolist(), cand.tolist()))
    uniq = []
    for p in pts:
        if uniq and p[0] == uniq[-1][0] and p[1] == uniq[-1][1]:
            continue
        uniq.append(p)
    if len(uniq) <= 2:
        return np.array([p[2] for p in uniq], dtype=np.intp)

    hull = []
    for p in uniq:
        while len(hull) >= 2 and _cross(*hull[-2][:2], *hull[-1][:2], *p[:2]) <= 0.0:
            hull.pop()
        hull.append(p)
    lo_len = len(hull) + 1
    for p in reversed(uniq[:-1]):
        while len(hull) >= lo_len and _cross(*hull[-2][:2], *hull[-1][:2], *p[:2]) <= 0.0:
            hull.pop()
        hull.append(p)
    return np.array([p[2] for p in hull[:-1]], dtype=np.intp)


def spindle_contains_xy(ax, ay, bx, by, px, py, r, tol):
    dx, dy = bx - ax, by - ay
    d = math.sqrt(dx * dx + dy * dy)
    if d == 0.0:
        qx, qy = px - ax, py - ay
        return math.sqrt(qx * qx + qy * qy) <= tol
    h = r * r - 0.25 * d * d
    h = math.sqrt(h) if h > 0.0 else 0.0
    mx, my = 0.5 * (ax + bx), 0.5 * (ay + by)
    nx, ny = -dy / d, dx / d
    qx, qy = px - (mx + h * nx), py - (my + h * ny)
    if math.sqrt(qx * qx + qy * qy) > r + tol:
        return False
    qx, qy = px - (mx - h * nx), py - (my - h * ny)
    return math.sqrt(qx * qx + qy * qy) <= r + tol


def prune_r_hull(xy, idx, r, tol):
    """Delete hull vertices lying in the r-spindle of their two neighbours until stable."""
    idx = np.asarray(idx, dtype=np.intp)
    m = len(idx)
    if m <= 2:
        return idx.copy()
    pts = np.asarray(xy, dtype=float)[idx].tolist()
    nxt = [(i + 1) % m for i in range(m)]
    prv = [(i - 1) % m for i in range(m)]
    alive = [True] * m
    count, clean, i = m, 0, 0
    while count >= 3 and clean < count:
        a, c = prv[i], nxt[i]
        if spindle_contains_xy(*pts[a], *pts[c], *pts[i], r, tol):
            nxt[a], prv[c] = c, a
            alive[i] = False
            count -= 1
            clean = 0
            i = a
        else:
            clean += 1
            i = c
    start = alive.index(True)
    out, i = [], start
    for _ in range(count):
        out.append(idx[i])
        i = nxt[i]
    return np.array(out, dtype=np.intp)
