"""Selects the compiled geometry kernels when available.

``GEOLINK_KERNELS=python`` in the environment forces the pure-Python
fallback (used by the benchmark and by tests that exercise both paths).
"""

from __future__ import annotations

import os

from geolink.geo import _kernels_py

if os.environ.get("GEOLINK_KERNELS", "").lower() == "python":
    _impl = _kernels_py
else:
    try:
        from geolink.geo import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = "compiled" if _impl is not _kernels_py else "python"

signed_area = _impl.signed_area
point_in_polygon = _impl.point_in_polygon
point_segment_distance = _impl.point_segment_distance
boundary_distance = _impl.boundary_distance
ring_is_simple = _impl.ring_is_simple
clip_convex = _impl.clip_convex
triangulate = _impl.triangulate
intersection_area = _impl.intersection_area
cells_inside = _impl.cells_inside
