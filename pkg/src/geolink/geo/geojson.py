"""Area ingest format: a GeoJSON-style FeatureCollection of polygons.

Each feature carries a Polygon geometry (single exterior ring, positions as
[lon, lat]) and properties {id, category, project}.
"""

from __future__ import annotations

import json

from geolink.errors import ValidationError
from geolink.geo.types import GeoPolygon


def parse_feature_collection(text: str) -> list[GeoPolygon]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"areas file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise ValidationError("areas file must be a FeatureCollection")
    features = doc.get("features")
    if not isinstance(features, list):
        raise ValidationError("FeatureCollection has no feature list")
    out = []
    for i, feature in enumerate(features):
        out.append(_parse_feature(feature, i))
    return out


def _parse_feature(feature, index: int) -> GeoPolygon:
    where = f"feature {index}"
    if not isinstance(feature, dict):
        raise ValidationError(f"{where}: not an object")
    geometry = feature.get("geometry") or {}
    if geometry.get("type") != "Polygon":
        raise ValidationError(f"{where}: only Polygon geometry is supported")
    coords = geometry.get("coordinates")
    if not isinstance(coords, list) or not coords:
        raise ValidationError(f"{where}: missing coordinates")
    if len(coords) > 1:
        raise ValidationError(f"{where}: interior rings are not supported")
    ring = [(float(p[0]), float(p[1])) for p in coords[0]]
    # GeoJSON rings repeat the first position; our rings are implicitly closed.
    if len(ring) >= 2 and ring[0] == ring[-1]:
        ring = ring[:-1]
    props = feature.get("properties") or {}
    poly_id = props.get("id")
    category = props.get("category")
    project = props.get("project")
    if not poly_id or not isinstance(poly_id, str):
        raise ValidationError(f"{where}: properties.id is required")
    if not category or not isinstance(category, str):
        raise ValidationError(f"{where}: properties.category is required")
    return GeoPolygon(id=poly_id, ring=tuple(ring), category=category, project_id=project)


def feature_of(polygon: GeoPolygon) -> dict:
    ring = [[x, y] for x, y in polygon.ring]
    ring.append(ring[0])
    return {
        "type": "Feature",
        "geometry": {"type": "Polygon", "coordinates": [ring]},
        "properties": {
            "id": polygon.id,
            "category": polygon.category,
            "project": polygon.project_id,
        },
    }
