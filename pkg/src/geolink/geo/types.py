"""Value types for the polygon analytics module."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from geolink.errors import ValidationError
from geolink.geo import kernels

# Guard against runaway heatmap grids.
MAX_GRID_CELLS = 1_000_000


@dataclass(frozen=True)
class GeoPolygon:
    """A simple georeferenced polygon.

    ``ring`` holds (lon, lat) vertices in degrees, implicitly closed
    (first vertex not repeated).
    """

    id: str
    ring: tuple[tuple[float, float], ...]
    category: str
    project_id: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "ring", tuple((float(x), float(y)) for x, y in self.ring))
        validate_ring(self.ring, self.id)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        xs = [p[0] for p in self.ring]
        ys = [p[1] for p in self.ring]
        return (min(xs), min(ys), max(xs), max(ys))


def validate_ring(ring, owner: str = "?") -> None:
    if len(ring) < 3:
        raise ValidationError(f"polygon {owner}: ring needs at least 3 vertices")
    for x, y in ring:
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValidationError(f"polygon {owner}: non-finite vertex")
    if ring[0] == ring[-1]:
        raise ValidationError(f"polygon {owner}: ring must not repeat the first vertex")
    if not kernels.ring_is_simple(list(ring)):
        raise ValidationError(f"polygon {owner}: ring is self-intersecting or degenerate")
    if kernels.signed_area(list(ring)) == 0.0:
        raise ValidationError(f"polygon {owner}: zero area")


@dataclass(frozen=True)
class GridSpec:
    """A regular lon/lat grid over a bounding box."""

    lon_min: float
    lat_min: float
    lon_max: float
    lat_max: float
    cell_size: float

    def __post_init__(self):
        if not all(
            math.isfinite(v)
            for v in (self.lon_min, self.lat_min, self.lon_max, self.lat_max, self.cell_size)
        ):
            raise ValidationError("grid: non-finite bounds")
        if self.lon_min >= self.lon_max or self.lat_min >= self.lat_max:
            raise ValidationError("grid: empty bounding box")
        if self.cell_size <= 0.0:
            raise ValidationError("grid: cell size must be positive")

    @property
    def cols(self) -> int:
        return math.ceil((self.lon_max - self.lon_min) / self.cell_size)

    @property
    def rows(self) -> int:
        return math.ceil((self.lat_max - self.lat_min) / self.cell_size)


@dataclass
class HeatmapLayer:
    """Row-major polygon counts per grid cell (row 0 = southernmost band)."""

    grid: GridSpec
    values: list[list[int]] = field(default_factory=list)


@dataclass(frozen=True)
class SensorSite:
    """A measuring station with a fixed position."""

    id: str
    lon: float
    lat: float
    parameters: frozenset[str] = frozenset()

    def __post_init__(self):
        if not (math.isfinite(self.lon) and math.isfinite(self.lat)):
            raise ValidationError(f"sensor {self.id}: non-finite position")
        object.__setattr__(self, "parameters", frozenset(self.parameters))
