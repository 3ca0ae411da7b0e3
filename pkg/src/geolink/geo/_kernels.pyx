# cython: language_level=3
"""Compiled geometry kernels; semantics mirror ``_kernels_py`` exactly."""

from libc.stdlib cimport malloc, free

cdef double _EPS = 1e-12


cdef double* _unpack(ring, Py_ssize_t* n_out) except NULL:
    cdef Py_ssize_t n = len(ring)
    cdef double* buf = <double*> malloc(2 * n * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        p = ring[i]
        buf[2 * i] = p[0]
        buf[2 * i + 1] = p[1]
    n_out[0] = n
    return buf


def signed_area(ring):
    """Shoelace area; positive for counter-clockwise rings."""
    cdef Py_ssize_t n
    cdef double* r = _unpack(ring, &n)
    cdef double total = 0.0
    cdef Py_ssize_t i, j
    try:
        for i in range(n):
            j = (i + 1) % n
            total += r[2 * i] * r[2 * j + 1] - r[2 * j] * r[2 * i + 1]
    finally:
        free(r)
    return 0.5 * total


cdef bint _pip(double x, double y, double* r, Py_ssize_t n) nogil:
    cdef bint inside = False
    cdef Py_ssize_t i, j
    cdef double xi, yi, xj, yj, xcross
    j = n - 1
    for i in range(n):
        xi = r[2 * i]
        yi = r[2 * i + 1]
        xj = r[2 * j]
        yj = r[2 * j + 1]
        if (yi > y) != (yj > y):
            xcross = (xj - xi) * (y - yi) / (yj - yi) + xi
            if x < xcross:
                inside = not inside
        j = i
    return inside


def point_in_polygon(double x, double y, ring):
    """Even-odd containment with a half-open edge convention."""
    cdef Py_ssize_t n
    cdef double* r = _unpack(ring, &n)
    try:
        return bool(_pip(x, y, r, n))
    finally:
        free(r)


cdef double _pseg(double px, double py, double ax, double ay,
                  double bx, double by) nogil:
    cdef double dx = bx - ax
    cdef double dy = by - ay
    cdef double seg2 = dx * dx + dy * dy
    cdef double t, cx, cy
    if seg2 <= 0.0:
        dx = px - ax
        dy = py - ay
        return (dx * dx + dy * dy) ** 0.5
    t = ((px - ax) * dx + (py - ay) * dy) / seg2
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    cx = ax + t * dx
    cy = ay + t * dy
    dx = px - cx
    dy = py - cy
    return (dx * dx + dy * dy) ** 0.5


def point_segment_distance(double px, double py, double ax, double ay,
                           double bx, double by):
    return _pseg(px, py, ax, ay, bx, by)


def boundary_distance(double x, double y, ring):
    cdef Py_ssize_t n
    cdef double* r = _unpack(ring, &n)
    cdef double best = 1e308
    cdef double d
    cdef Py_ssize_t i, j
    try:
        for i in range(n):
            j = (i + 1) % n
            d = _pseg(x, y, r[2 * i], r[2 * i + 1], r[2 * j], r[2 * j + 1])
            if d < best:
                best = d
    finally:
        free(r)
    return best


cdef int _orient(double px, double py, double qx, double qy,
                 double rx, double ry) nogil:
    cdef double v = (qx - px) * (ry - py) - (qy - py) * (rx - px)
    if v > _EPS:
        return 1
    if v < -_EPS:
        return -1
    return 0


cdef bint _on_seg(double px, double py, double qx, double qy,
                  double rx, double ry) nogil:
    return (min(px, qx) - _EPS <= rx <= max(px, qx) + _EPS
            and min(py, qy) - _EPS <= ry <= max(py, qy) + _EPS)


cdef bint _cross_or_touch(double ax, double ay, double bx, double by,
                          double cx, double cy, double dx, double dy) nogil:
    cdef int d1 = _orient(cx, cy, dx, dy, ax, ay)
    cdef int d2 = _orient(cx, cy, dx, dy, bx, by)
    cdef int d3 = _orient(ax, ay, bx, by, cx, cy)
    cdef int d4 = _orient(ax, ay, bx, by, dx, dy)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and \
       ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    if d1 == 0 and _on_seg(cx, cy, dx, dy, ax, ay):
        return True
    if d2 == 0 and _on_seg(cx, cy, dx, dy, bx, by):
        return True
    if d3 == 0 and _on_seg(ax, ay, bx, by, cx, cy):
        return True
    if d4 == 0 and _on_seg(ax, ay, bx, by, dx, dy):
        return True
    return False


def ring_is_simple(ring):
    """No repeated consecutive vertices, no crossing or touching edges."""
    cdef Py_ssize_t n
    cdef double* r
    cdef Py_ssize_t i, j, i2, j2
    if len(ring) < 3:
        return False
    r = _unpack(ring, &n)
    try:
        for i in range(n):
            j = (i + 1) % n
            if abs(r[2 * i] - r[2 * j]) <= _EPS and \
               abs(r[2 * i + 1] - r[2 * j + 1]) <= _EPS:
                return False
        for i in range(n):
            i2 = (i + 1) % n
            for j in range(i + 1, n):
                j2 = (j + 1) % n
                if j == i or j2 == i or i2 == j:
                    continue
                if _cross_or_touch(r[2 * i], r[2 * i + 1], r[2 * i2], r[2 * i2 + 1],
                                   r[2 * j], r[2 * j + 1], r[2 * j2], r[2 * j2 + 1]):
                    return False
        return True
    finally:
        free(r)


def clip_convex(subject, clip):
    """Sutherland-Hodgman clip of ``subject`` against a convex CCW ``clip``."""
    cdef list output = list(subject)
    cdef list inputs
    cdef Py_ssize_t n = len(clip)
    cdef Py_ssize_t k, m, i
    cdef double cx1, cy1, cx2, cy2, ex, ey, sx, sy, px, py
    cdef double dcx, dcy, dpx, dpy, denom, n1, n2
    cdef bint s_in, p_in
    cx1 = clip[n - 1][0]
    cy1 = clip[n - 1][1]
    for k in range(n):
        cx2 = clip[k][0]
        cy2 = clip[k][1]
        if not output:
            return []
        inputs = output
        output = []
        ex = cx2 - cx1
        ey = cy2 - cy1
        m = len(inputs)
        sx = inputs[m - 1][0]
        sy = inputs[m - 1][1]
        s_in = ex * (sy - cy1) - ey * (sx - cx1) >= 0.0
        for i in range(m):
            px = inputs[i][0]
            py = inputs[i][1]
            p_in = ex * (py - cy1) - ey * (px - cx1) >= 0.0
            if p_in != s_in:
                dcx = cx1 - cx2
                dcy = cy1 - cy2
                dpx = sx - px
                dpy = sy - py
                denom = dcx * dpy - dcy * dpx
                if abs(denom) < 1e-300:
                    output.append((px, py))
                else:
                    n1 = cx1 * cy2 - cy1 * cx2
                    n2 = sx * py - sy * px
                    output.append(((n1 * dpx - n2 * dcx) / denom,
                                   (n1 * dpy - n2 * dcy) / denom))
            if p_in:
                output.append((px, py))
            sx = px
            sy = py
            s_in = p_in
        cx1 = cx2
        cy1 = cy2
    return output


def triangulate(ring):
    """Ear-clipping triangulation of a simple ring into CCW triangles."""
    cdef list pts = list(ring)
    if signed_area(pts) < 0.0:
        pts.reverse()
    cdef list idx = list(range(len(pts)))
    cdef list tris = []
    cdef Py_ssize_t n, k, ia, ib, ic, m, best_k
    cdef double ax, ay, bx, by, cx, cy, px, py
    cdef double cross, d1, d2, d3, best_cross
    cdef bint clipped, blocked
    while len(idx) > 3:
        n = len(idx)
        clipped = False
        for k in range(n):
            ia = idx[(k + n - 1) % n]
            ib = idx[k]
            ic = idx[(k + 1) % n]
            ax = pts[ia][0]
            ay = pts[ia][1]
            bx = pts[ib][0]
            by = pts[ib][1]
            cx = pts[ic][0]
            cy = pts[ic][1]
            cross = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
            if cross <= _EPS:
                continue
            blocked = False
            for m in idx:
                if m == ia or m == ib or m == ic:
                    continue
                px = pts[m][0]
                py = pts[m][1]
                d1 = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
                d2 = (cx - bx) * (py - by) - (cy - by) * (px - bx)
                d3 = (ax - cx) * (py - cy) - (ay - cy) * (px - cx)
                if d1 > _EPS and d2 > _EPS and d3 > _EPS:
                    blocked = True
                    break
            if blocked:
                continue
            tris.append(((ax, ay), (bx, by), (cx, cy)))
            del idx[k]
            clipped = True
            break
        if not clipped:
            best_k = 0
            best_cross = -1e308
            for k in range(n):
                ax = pts[idx[(k + n - 1) % n]][0]
                ay = pts[idx[(k + n - 1) % n]][1]
                bx = pts[idx[k]][0]
                by = pts[idx[k]][1]
                cx = pts[idx[(k + 1) % n]][0]
                cy = pts[idx[(k + 1) % n]][1]
                cross = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
                if cross > best_cross:
                    best_cross = cross
                    best_k = k
            k = best_k
            tris.append((tuple(pts[idx[(k + n - 1) % n]]),
                         tuple(pts[idx[k]]),
                         tuple(pts[idx[(k + 1) % n]])))
            del idx[k]
    tris.append((tuple(pts[idx[0]]), tuple(pts[idx[1]]), tuple(pts[idx[2]])))
    return tris


def intersection_area(ring_a, ring_b):
    """Exact intersection area via triangulation + convex-convex clipping."""
    tris_a = triangulate(ring_a)
    tris_b = triangulate(ring_b)
    cdef double total = 0.0
    for ta in tris_a:
        for tb in tris_b:
            piece = clip_convex(ta, tb)
            if len(piece) >= 3:
                total += abs(signed_area(piece))
    return total


def cells_inside(ring, double x0, double y0, double cell, Py_ssize_t nx, Py_ssize_t ny):
    """Flat row-major indices of grid cells whose center lies in the ring."""
    cdef Py_ssize_t n
    cdef double* r = _unpack(ring, &n)
    cdef double min_x = 1e308, max_x = -1e308, min_y = 1e308, max_y = -1e308
    cdef Py_ssize_t i, c_lo, c_hi, r_lo, r_hi, row, col, base
    cdef double cx, cy
    cdef list out = []
    try:
        for i in range(n):
            if r[2 * i] < min_x:
                min_x = r[2 * i]
            if r[2 * i] > max_x:
                max_x = r[2 * i]
            if r[2 * i + 1] < min_y:
                min_y = r[2 * i + 1]
            if r[2 * i + 1] > max_y:
                max_y = r[2 * i + 1]
        c_lo = max(0, <Py_ssize_t>((min_x - x0) / cell - 0.5))
        c_hi = min(nx - 1, <Py_ssize_t>((max_x - x0) / cell + 0.5))
        r_lo = max(0, <Py_ssize_t>((min_y - y0) / cell - 0.5))
        r_hi = min(ny - 1, <Py_ssize_t>((max_y - y0) / cell + 0.5))
        for row in range(r_lo, r_hi + 1):
            cy = y0 + (row + 0.5) * cell
            base = row * nx
            for col in range(c_lo, c_hi + 1):
                cx = x0 + (col + 0.5) * cell
                if _pip(cx, cy, r, n):
                    out.append(base + col)
        return out
    finally:
        free(r)
