"""Store for geospatial reference data: area polygons and station sites.

Areas arrive as GeoJSON features, stations as plain records. Both persist
as JSON-lines files so ingest is append-cheap and restart-safe.
"""

from __future__ import annotations

import json
from pathlib import Path

from geolink.errors import ConflictError, NotFoundError, ValidationError
from geolink.geo.geojson import _parse_feature, feature_of
from geolink.geo.types import GeoPolygon, SensorSite
from geolink.locks import RWLock


class GeoDataStore:
    def __init__(self, areas_path: str | Path | None = None, stations_path: str | Path | None = None):
        self._areas: dict[str, GeoPolygon] = {}
        self._stations: dict[str, SensorSite] = {}
        self._lock = RWLock()
        self._areas_path = Path(areas_path) if areas_path else None
        self._stations_path = Path(stations_path) if stations_path else None
        if self._areas_path is not None and self._areas_path.exists():
            for line in self._areas_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    polygon = _parse_feature(json.loads(line), len(self._areas))
                    self._areas[polygon.id] = polygon
        if self._stations_path is not None and self._stations_path.exists():
            for line in self._stations_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    site = _station_from_dict(json.loads(line))
                    self._stations[site.id] = site

    # -- areas ---------------------------------------------------------------

    def add_areas(self, features: list[dict]) -> list[str]:
        """Validate and add a batch of GeoJSON features; all or nothing."""
        polygons = [_parse_feature(f, i) for i, f in enumerate(features)]
        with self._lock.write():
            seen = set()
            for polygon in polygons:
                if polygon.id in self._areas or polygon.id in seen:
                    raise ConflictError(f"area {polygon.id} already ingested")
                seen.add(polygon.id)
            for polygon in polygons:
                self._areas[polygon.id] = polygon
            self._rewrite_areas()
            return [p.id for p in polygons]

    def delete_areas(self, ids: list[str]) -> None:
        with self._lock.write():
            for area_id in ids:
                self._areas.pop(area_id, None)
            self._rewrite_areas()

    def area(self, area_id: str) -> dict:
        with self._lock.read():
            polygon = self._areas.get(area_id)
            if polygon is None:
                raise NotFoundError(f"area {area_id} does not exist")
            return feature_of(polygon)

    def areas(self) -> list[dict]:
        with self._lock.read():
            return [feature_of(self._areas[i]) for i in sorted(self._areas)]

    def area_polygons(self) -> list[GeoPolygon]:
        with self._lock.read():
            return [self._areas[i] for i in sorted(self._areas)]

    # -- stations --------------------------------------------------------------

    def add_stations(self, rows: list[dict]) -> list[str]:
        """Add station sites; exact duplicates are skipped, conflicting
        re-definitions rejected."""
        sites = [_station_from_dict(row) for row in rows]
        with self._lock.write():
            added = []
            for site in sites:
                existing = self._stations.get(site.id)
                if existing is not None:
                    if existing == site:
                        continue
                    raise ConflictError(f"station {site.id} already exists with different data")
                self._stations[site.id] = site
                added.append(site.id)
            self._rewrite_stations()
            return added

    def delete_stations(self, ids: list[str]) -> None:
        with self._lock.write():
            for station_id in ids:
                self._stations.pop(station_id, None)
            self._rewrite_stations()

    def stations(self) -> list[dict]:
        with self._lock.read():
            return [_station_to_dict(self._stations[i]) for i in sorted(self._stations)]

    def station_sites(self) -> list[SensorSite]:
        with self._lock.read():
            return [self._stations[i] for i in sorted(self._stations)]

    def snapshot(self) -> str:
        with self._lock.read():
            doc = {
                "areas": [feature_of(self._areas[i]) for i in sorted(self._areas)],
                "stations": [_station_to_dict(self._stations[i]) for i in sorted(self._stations)],
            }
            return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    # -- persistence -------------------------------------------------------------

    def _rewrite_areas(self) -> None:
        if self._areas_path is None:
            return
        self._areas_path.parent.mkdir(parents=True, exist_ok=True)
        lines = [
            json.dumps(feature_of(self._areas[i]), ensure_ascii=False, sort_keys=True)
            for i in sorted(self._areas)
        ]
        self._areas_path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")

    def _rewrite_stations(self) -> None:
        if self._stations_path is None:
            return
        self._stations_path.parent.mkdir(parents=True, exist_ok=True)
        lines = [
            json.dumps(_station_to_dict(self._stations[i]), ensure_ascii=False, sort_keys=True)
            for i in sorted(self._stations)
        ]
        self._stations_path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def _station_to_dict(site: SensorSite) -> dict:
    return {
        "station": site.id,
        "lon": site.lon,
        "lat": site.lat,
        "parameters": sorted(site.parameters),
    }


def _station_from_dict(doc: dict) -> SensorSite:
    try:
        return SensorSite(
            id=doc["station"],
            lon=float(doc["lon"]),
            lat=float(doc["lat"]),
            parameters=frozenset(doc.get("parameters", ())),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad station record: {exc}") from exc


def parse_stations_csv(text: str) -> list[dict]:
    """Stations file: CSV ``station,lon,lat,parameters`` with parameters
    separated by ';'."""
    import csv
    import io

    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError("stations file is empty") from None
    if [h.strip() for h in header] != ["station", "lon", "lat", "parameters"]:
        raise ValidationError("stations header must be station,lon,lat,parameters")
    rows = []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 4:
            raise ValidationError(f"stations line {line_no}: expected 4 fields")
        station, lon, lat, params = (cell.strip() for cell in row)
        try:
            rows.append(
                {
                    "station": station,
                    "lon": float(lon),
                    "lat": float(lat),
                    "parameters": [p.strip() for p in params.split(";") if p.strip()],
                }
            )
        except ValueError as exc:
            raise ValidationError(f"stations line {line_no}: {exc}") from exc
    return rows
