"""Polygon analytics: area, overlap, sensor association, heatmap grids.

All functions are pure and safe for unrestricted parallel use. Coordinates
are treated as planar degrees; the regions this serves are small enough
that geodesic corrections are deliberately out of scope.
"""

from __future__ import annotations

from geolink.errors import ResourceError
from geolink.geo import kernels
from geolink.geo.types import MAX_GRID_CELLS, GeoPolygon, GridSpec, HeatmapLayer, SensorSite


def polygon_area(polygon: GeoPolygon) -> float:
    """Absolute shoelace area in squared degrees."""
    return abs(kernels.signed_area(list(polygon.ring)))


def overlap_fraction(a: GeoPolygon, b: GeoPolygon) -> float:
    """Fraction of the target polygon ``b`` covered by ``a``.

    Measured relative to ``b`` so a restriction on ``a`` can be judged by
    how much of ``b`` it reaches.
    """
    inter = kernels.intersection_area(list(a.ring), list(b.ring))
    frac = inter / polygon_area(b)
    # Clamp float residue from summing triangle pieces.
    return min(1.0, max(0.0, frac))


def associate_sensors(
    areas: list[GeoPolygon],
    sensors: list[SensorSite],
    radius: float = 0.1,
) -> list[tuple[str, str]]:
    """Pairs (sensor id, area id) for sensors inside an area or within
    ``radius`` degrees of its boundary. Output is sorted, so the result is
    independent of input ordering."""
    pairs = set()
    for area in areas:
        ring = list(area.ring)
        for sensor in sensors:
            if kernels.point_in_polygon(sensor.lon, sensor.lat, ring):
                pairs.add((sensor.id, area.id))
            elif kernels.boundary_distance(sensor.lon, sensor.lat, ring) <= radius:
                pairs.add((sensor.id, area.id))
    return sorted(pairs)


def aggregate_heatmap(
    polygons: list[GeoPolygon],
    categories: set[str] | None,
    grid: GridSpec,
) -> HeatmapLayer:
    """Per-cell count of selected polygons containing the cell center.

    ``categories`` of ``None`` selects every polygon. Cell centers exactly
    on a polygon's lower/left boundary count as covered (kernel tie-break),
    so tiled polygons never double-count a center.
    """
    nx, ny = grid.cols, grid.rows
    if nx * ny > MAX_GRID_CELLS:
        raise ResourceError(f"grid of {nx * ny} cells exceeds the {MAX_GRID_CELLS} guard")
    flat = [0] * (nx * ny)
    for poly in polygons:
        if categories is not None and poly.category not in categories:
            continue
        for i in kernels.cells_inside(
            list(poly.ring), grid.lon_min, grid.lat_min, grid.cell_size, nx, ny
        ):
            flat[i] += 1
    values = [flat[r * nx : (r + 1) * nx] for r in range(ny)]
    return HeatmapLayer(grid=grid, values=values)
