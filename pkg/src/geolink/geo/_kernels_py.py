"""Pure-Python geometry kernels.

Reference implementation of the hot loops (point containment, clipping,
triangulation, grid aggregation). A compiled twin with identical semantics
lives in ``_kernels.pyx``; ``geolink.geo.kernels`` picks one at import time.

Rings are lists of ``(x, y)`` float pairs, implicitly closed (first vertex
not repeated). All predicates work in planar coordinate space.
"""

from __future__ import annotations

_EPS = 1e-12


def signed_area(ring) -> float:
    """Shoelace area; positive for counter-clockwise rings."""
    total = 0.0
    n = len(ring)
    for i in range(n):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return 0.5 * total


def point_in_polygon(x: float, y: float, ring) -> bool:
    """Even-odd containment with a half-open edge convention.

    Points exactly on the lower/left boundary count as inside, points on
    the upper/right boundary as outside, so grid tilings never double-count.
    """
    inside = False
    n = len(ring)
    j = n - 1
    for i in range(n):
        xi, yi = ring[i]
        xj, yj = ring[j]
        if (yi > y) != (yj > y):
            xcross = (xj - xi) * (y - yi) / (yj - yi) + xi
            if x < xcross:
                inside = not inside
        j = i
    return inside


def point_segment_distance(px, py, ax, ay, bx, by) -> float:
    """Distance from point (px, py) to segment (a, b)."""
    dx = bx - ax
    dy = by - ay
    seg2 = dx * dx + dy * dy
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


def boundary_distance(x: float, y: float, ring) -> float:
    """Minimum distance from a point to the polygon outline."""
    best = float("inf")
    n = len(ring)
    for i in range(n):
        ax, ay = ring[i]
        bx, by = ring[(i + 1) % n]
        d = point_segment_distance(x, y, ax, ay, bx, by)
        if d < best:
            best = d
    return best


def _segments_cross(ax, ay, bx, by, cx, cy, dx, dy) -> bool:
    """True when segment a-b touches or crosses segment c-d."""

    def orient(px, py, qx, qy, rx, ry):
        v = (qx - px) * (ry - py) - (qy - py) * (rx - px)
        if v > _EPS:
            return 1
        if v < -_EPS:
            return -1
        return 0

    def on_seg(px, py, qx, qy, rx, ry):
        return (
            min(px, qx) - _EPS <= rx <= max(px, qx) + _EPS
            and min(py, qy) - _EPS <= ry <= max(py, qy) + _EPS
        )

    d1 = orient(cx, cy, dx, dy, ax, ay)
    d2 = orient(cx, cy, dx, dy, bx, by)
    d3 = orient(ax, ay, bx, by, cx, cy)
    d4 = orient(ax, ay, bx, by, dx, dy)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    if d1 == 0 and on_seg(cx, cy, dx, dy, ax, ay):
        return True
    if d2 == 0 and on_seg(cx, cy, dx, dy, bx, by):
        return True
    if d3 == 0 and on_seg(ax, ay, bx, by, cx, cy):
        return True
    if d4 == 0 and on_seg(ax, ay, bx, by, dx, dy):
        return True
    return False


def ring_is_simple(ring) -> bool:
    """No repeated consecutive vertices, no crossing or touching edges."""
    n = len(ring)
    if n < 3:
        return False
    for i in range(n):
        ax, ay = ring[i]
        bx, by = ring[(i + 1) % n]
        if abs(ax - bx) <= _EPS and abs(ay - by) <= _EPS:
            return False
    for i in range(n):
        ax, ay = ring[i]
        bx, by = ring[(i + 1) % n]
        for j in range(i + 1, n):
            # Skip the segment itself and the two adjacent ones.
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            cx, cy = ring[j]
            dx, dy = ring[(j + 1) % n]
            if _segments_cross(ax, ay, bx, by, cx, cy, dx, dy):
                return False
    return True


def clip_convex(subject, clip):
    """Sutherland-Hodgman clip of ``subject`` against a convex CCW ``clip``.

    Returns the clipped ring (possibly empty). Exact for convex clip rings;
    vertices exactly on a clip edge are kept.
    """
    output = list(subject)
    n = len(clip)
    cx1, cy1 = clip[n - 1]
    for k in range(n):
        cx2, cy2 = clip[k]
        if not output:
            return []
        inputs = output
        output = []
        ex = cx2 - cx1
        ey = cy2 - cy1
        sx, sy = inputs[-1]
        s_in = ex * (sy - cy1) - ey * (sx - cx1) >= 0.0
        for px, py in inputs:
            p_in = ex * (py - cy1) - ey * (px - cx1) >= 0.0
            if p_in != s_in:
                # Segment s-p crosses the clip line; append the crossing.
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
                    output.append(
                        ((n1 * dpx - n2 * dcx) / denom, (n1 * dpy - n2 * dcy) / denom)
                    )
            if p_in:
                output.append((px, py))
            sx, sy = px, py
            s_in = p_in
        cx1, cy1 = cx2, cy2
    return output


def triangulate(ring):
    """Ear-clipping triangulation of a simple ring into CCW triangles."""
    pts = list(ring)
    if signed_area(pts) < 0.0:
        pts.reverse()
    idx = list(range(len(pts)))
    tris = []
    while len(idx) > 3:
        n = len(idx)
        clipped = False
        for k in range(n):
            ia = idx[(k - 1) % n]
            ib = idx[k]
            ic = idx[(k + 1) % n]
            ax, ay = pts[ia]
            bx, by = pts[ib]
            cx, cy = pts[ic]
            cross = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
            if cross <= _EPS:
                continue  # reflex or collinear corner, not an ear
            if _any_point_inside(pts, idx, ia, ib, ic, ax, ay, bx, by, cx, cy):
                continue
            tris.append(((ax, ay), (bx, by), (cx, cy)))
            del idx[k]
            clipped = True
            break
        if not clipped:
            # Numerically degenerate leftovers: drop the sharpest convex
            # corner so progress is always made.
            best_k, best_cross = 0, float("-inf")
            for k in range(n):
                ax, ay = pts[idx[(k - 1) % n]]
                bx, by = pts[idx[k]]
                cx, cy = pts[idx[(k + 1) % n]]
                cross = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
                if cross > best_cross:
                    best_cross = cross
                    best_k = k
            k = best_k
            tris.append(
                (
                    pts[idx[(k - 1) % n]],
                    pts[idx[k]],
                    pts[idx[(k + 1) % n]],
                )
            )
            del idx[k]
    tris.append((pts[idx[0]], pts[idx[1]], pts[idx[2]]))
    return tris


def _any_point_inside(pts, idx, ia, ib, ic, ax, ay, bx, by, cx, cy):
    for m in idx:
        if m in (ia, ib, ic):
            continue
        px, py = pts[m]
        d1 = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
        d2 = (cx - bx) * (py - by) - (cy - by) * (px - bx)
        d3 = (ax - cx) * (py - cy) - (ay - cy) * (px - cx)
        if d1 > _EPS and d2 > _EPS and d3 > _EPS:
            return True
    return False


def intersection_area(ring_a, ring_b) -> float:
    """Area of the intersection of two simple rings.

    Both rings are triangulated and every triangle pair is clipped
    (convex-convex), so concave inputs are handled exactly.
    """
    tris_a = triangulate(ring_a)
    tris_b = triangulate(ring_b)
    total = 0.0
    for ta in tris_a:
        for tb in tris_b:
            piece = clip_convex(ta, tb)
            if len(piece) >= 3:
                total += abs(signed_area(piece))
    return total


def cells_inside(ring, x0: float, y0: float, cell: float, nx: int, ny: int):
    """Flat row-major indices of grid cells whose center lies in the ring.

    Cell (col c, row r) covers ``[x0 + c*cell, x0 + (c+1)*cell)`` by
    ``[y0 + r*cell, ...)``; its index is ``r * nx + c``.
    """
    min_x = min(p[0] for p in ring)
    max_x = max(p[0] for p in ring)
    min_y = min(p[1] for p in ring)
    max_y = max(p[1] for p in ring)
    c_lo = max(0, int((min_x - x0) / cell - 0.5))
    c_hi = min(nx - 1, int((max_x - x0) / cell + 0.5))
    r_lo = max(0, int((min_y - y0) / cell - 0.5))
    r_hi = min(ny - 1, int((max_y - y0) / cell + 0.5))
    out = []
    for r in range(r_lo, r_hi + 1):
        cy = y0 + (r + 0.5) * cell
        base = r * nx
        for c in range(c_lo, c_hi + 1):
            cx = x0 + (c + 0.5) * cell
            if point_in_polygon(cx, cy, ring):
                out.append(base + c)
    return out
