"""Polygon geometry: area, overlap, sensor association, heatmap grids."""

from geolink.geo.ops import (
    aggregate_heatmap,
    associate_sensors,
    overlap_fraction,
    polygon_area,
)
from geolink.geo.types import GeoPolygon, GridSpec, HeatmapLayer, SensorSite

__all__ = [
    "GeoPolygon",
    "GridSpec",
    "HeatmapLayer",
    "SensorSite",
    "polygon_area",
    "overlap_fraction",
    "associate_sensors",
    "aggregate_heatmap",
]
