"""Backend facade: the stores, the pipeline, and the restriction engine.

Two wirings share this interface. Embedded mode holds every store in
process. Multi-process mode spawns one worker per store module on
loopback sockets and talks to them through proxies; the gateway remains
the sole externally reachable listener either way.
"""

from __future__ import annotations

import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path

from geolink.errors import GeolinkError, StorageError, ValidationError
from geolink.geo.geojson import _parse_feature, parse_feature_collection, feature_of
from geolink.geo.ops import associate_sensors, overlap_fraction
from geolink.geo.types import GeoPolygon, SensorSite
from geolink.graph.store import PropertyGraph
from geolink.index.inverted import SentenceIndex
from geolink.restrictions.engine import RestrictionEngine
from geolink.sensors.feed import ReadingsReport, SensorFeed
from geolink.server.config import ServerConfig
from geolink.server.geodata import GeoDataStore, parse_stations_csv, _station_from_dict
from geolink.server.rpc import RpcProxy
from geolink.textpipe.classify import DEFAULT_LEXICON
from geolink.textpipe.entities import EntityRules, Gazetteer
from geolink.textpipe.formats import parse_document, parse_lexicon, parse_name_list
from geolink.textpipe.pipeline import DocumentPipeline, IngestReport
from geolink.textpipe.store import DocumentStore

WORKER_MODULES = ("graph", "index", "documents", "sensors", "geodata")


@dataclass
class _Worker:
    module: str
    process: subprocess.Popen
    port: int


class Backend:
    def __init__(self, config: ServerConfig, graph, index, documents, sensors, geodata, workers=None):
        self.config = config
        self.graph = graph
        self.index = index
        self.documents = documents
        self.sensors = sensors
        self.geodata = geodata
        self._workers: list[_Worker] = workers or []
        self._lexicon = DEFAULT_LEXICON
        entity_rules = EntityRules()
        if config.lexicon_path:
            self._lexicon = parse_lexicon(Path(config.lexicon_path).read_text(encoding="utf-8"))
        persons = companies = ()
        if config.persons_path:
            persons = parse_name_list(Path(config.persons_path).read_text(encoding="utf-8"))
        if config.companies_path:
            companies = parse_name_list(Path(config.companies_path).read_text(encoding="utf-8"))
        if persons or companies:
            entity_rules = EntityRules(gazetteer=Gazetteer(persons=persons, companies=companies))
        self.pipeline = DocumentPipeline(
            graph=self.graph,
            index=self.index,
            documents=self.documents,
            lexicon=self._lexicon,
            entity_rules=entity_rules,
        )
        self.engine = RestrictionEngine(self.graph, self.sensors, min_overlap=config.min_overlap)
        self._rebuild_index()

    # -- construction --------------------------------------------------------

    @classmethod
    def embedded(cls, config: ServerConfig) -> "Backend":
        data_dir = Path(config.data_dir)
        data_dir.mkdir(parents=True, exist_ok=True)
        return cls(
            config,
            graph=PropertyGraph(wal_path=data_dir / "graph.wal"),
            index=SentenceIndex(),
            documents=DocumentStore(directory=data_dir / "documents"),
            sensors=SensorFeed(
                store_path=data_dir / "readings.csv", max_age_s=config.sensor_max_age_s
            ),
            geodata=GeoDataStore(
                areas_path=data_dir / "areas.jsonl",
                stations_path=data_dir / "stations.jsonl",
            ),
        )

    @classmethod
    def multiprocess(cls, config: ServerConfig) -> "Backend":
        data_dir = Path(config.data_dir)
        data_dir.mkdir(parents=True, exist_ok=True)
        workers: list[_Worker] = []
        proxies: dict[str, RpcProxy] = {}
        try:
            for module in WORKER_MODULES:
                process = subprocess.Popen(
                    [
                        sys.executable, "-m", "geolink.server.worker",
                        "--module", module,
                        "--data-dir", str(data_dir),
                        "--sensor-max-age", str(config.sensor_max_age_s),
                    ],
                    stdout=subprocess.PIPE,
                    stderr=subprocess.DEVNULL,
                    text=True,
                )
                line = process.stdout.readline().strip()
                if not line.startswith("READY "):
                    raise StorageError(f"{module} worker failed to start: {line!r}")
                port = int(line.split()[1])
                workers.append(_Worker(module=module, process=process, port=port))
                proxies[module] = RpcProxy(f"http://127.0.0.1:{port}", module)
        except BaseException:
            for worker in workers:
                worker.process.terminate()
            raise
        return cls(
            config,
            graph=proxies["graph"],
            index=proxies["index"],
            documents=proxies["documents"],
            sensors=proxies["sensors"],
            geodata=proxies["geodata"],
            workers=workers,
        )

    def close(self) -> None:
        for worker in self._workers:
            worker.process.terminate()
        for worker in self._workers:
            try:
                worker.process.wait(timeout=5)
            except subprocess.TimeoutExpired:
                worker.process.kill()
        self._workers = []
        for store in (self.graph, self.sensors):
            close = getattr(store, "close", None)
            if callable(close):
                close()

    def worker_ports(self) -> dict[str, int]:
        return {w.module: w.port for w in self._workers}

    def _rebuild_index(self) -> None:
        """The index has no persistence of its own; rebuild from documents."""
        if self.index.stats()["sentenceCount"] > 0:
            return
        for stored in self.documents.all():
            for sentence in stored.sentences:
                self.index.index_sentence(sentence, stored.record.project_id)

    # -- ingest orchestration ---------------------------------------------------

    def ingest_document_text(self, text: str) -> IngestReport:
        return self.pipeline.ingest(parse_document(text))

    def ingest_areas_text(self, text: str) -> dict:
        polygons = parse_feature_collection(text)
        return self._ingest_areas(polygons)

    def _ingest_areas(self, polygons: list[GeoPolygon]) -> dict:
        if not polygons:
            raise ValidationError("areas file contains no features")
        existing = [_parse_feature(f, i) for i, f in enumerate(self.geodata.areas())]
        added_ids = self.geodata.add_areas([feature_of(p) for p in polygons])
        try:
            ops, overlap_edges, associations = self._area_graph_ops(polygons, existing)
            self.graph.apply(ops)
        except BaseException as exc:
            self.geodata.delete_areas(added_ids)
            if isinstance(exc, GeolinkError):
                raise
            raise StorageError(f"area ingest failed: {exc}") from exc
        return {"areas": len(added_ids), "overlapEdges": overlap_edges, "associations": associations}

    def _area_graph_ops(self, new_polygons, existing_polygons):
        ops: list[dict] = []
        refs: dict[str, str] = {}
        for i, polygon in enumerate(new_polygons):
            ref = f"area_{i}"
            refs[polygon.id] = ref
            ops.append(
                {
                    "op": "ensure_node",
                    "label": "Area",
                    "match": {"name": polygon.id},
                    "props": {"category": polygon.category},
                    "ref": ref,
                }
            )
            if polygon.project_id:
                project_ref = f"area_project_{i}"
                ops.append(
                    {
                        "op": "ensure_node",
                        "label": "Project",
                        "match": {"name": polygon.project_id},
                        "ref": project_ref,
                    }
                )
                ops.append(
                    {
                        "op": "ensure_edge",
                        "source": f"@{project_ref}",
                        "target": f"@{ref}",
                        "label": "HAS_AREA",
                        "props": {},
                    }
                )

        def endpoint(polygon_id: str):
            if polygon_id in refs:
                return f"@{refs[polygon_id]}"
            found = self.graph.find_nodes("Area", {"name": polygon_id})
            return found[0].id if found else None

        overlap_edges = 0
        floor = self.config.min_overlap
        all_polygons = list(existing_polygons) + list(new_polygons)
        new_ids = {p.id for p in new_polygons}
        for a in all_polygons:
            for b in all_polygons:
                if a.id == b.id:
                    continue
                if a.id not in new_ids and b.id not in new_ids:
                    continue  # pair predates this ingest
                fraction = overlap_fraction(a, b)
                if fraction < floor:
                    continue
                src, dst = endpoint(a.id), endpoint(b.id)
                if src is None or dst is None:
                    continue
                ops.append(
                    {
                        "op": "ensure_edge",
                        "source": src,
                        "target": dst,
                        "label": "OVERLAPS",
                        "props": {"fraction": fraction},
                    }
                )
                overlap_edges += 1

        sites = [_station_from_dict(s) for s in self.geodata.stations()]
        associations = 0
        for station_id, area_id in associate_sensors(
            list(new_polygons), sites, radius=self.config.association_radius_deg
        ):
            sensor_nodes = self.graph.find_nodes("Sensor", {"name": station_id})
            if not sensor_nodes:
                continue
            ops.append(
                {
                    "op": "ensure_edge",
                    "source": sensor_nodes[0].id,
                    "target": endpoint(area_id),
                    "label": "APPLIES_TO",
                    "props": {},
                }
            )
            associations += 1
        return ops, overlap_edges, associations

    def ingest_stations_text(self, text: str) -> dict:
        rows = parse_stations_csv(text)
        if not rows:
            raise ValidationError("stations file contains no rows")
        added_ids = self.geodata.add_stations(rows)
        try:
            ops, associations = self._station_graph_ops(
                [row for row in rows if row["station"] in set(added_ids)]
            )
            self.graph.apply(ops)
        except BaseException as exc:
            self.geodata.delete_stations(added_ids)
            if isinstance(exc, GeolinkError):
                raise
            raise StorageError(f"station ingest failed: {exc}") from exc
        return {"stations": len(added_ids), "associations": associations}

    def _station_graph_ops(self, rows: list[dict]):
        ops: list[dict] = []
        refs: dict[str, str] = {}
        sites: list[SensorSite] = []
        for i, row in enumerate(rows):
            site = _station_from_dict(row)
            sites.append(site)
            ref = f"sensor_{i}"
            refs[site.id] = ref
            ops.append(
                {
                    "op": "ensure_node",
                    "label": "Sensor",
                    "match": {"name": site.id},
                    "props": {"parameters": ",".join(sorted(site.parameters))},
                    "ref": ref,
                }
            )
        areas = [_parse_feature(f, i) for i, f in enumerate(self.geodata.areas())]
        associations = 0
        for station_id, area_id in associate_sensors(
            areas, sites, radius=self.config.association_radius_deg
        ):
            area_nodes = self.graph.find_nodes("Area", {"name": area_id})
            if not area_nodes:
                continue
            ops.append(
                {
                    "op": "ensure_edge",
                    "source": f"@{refs[station_id]}",
                    "target": area_nodes[0].id,
                    "label": "APPLIES_TO",
                    "props": {},
                }
            )
            associations += 1
        return ops, associations

    def ingest_readings_text(self, text: str) -> ReadingsReport:
        return self.sensors.ingest_readings_text(text)

    def snapshots(self) -> dict[str, str]:
        """Canonical state of every store (atomicity and parity checks)."""
        return {
            "graph": self.graph.snapshot(),
            "index": self.index.snapshot(),
            "documents": self.documents.snapshot(),
            "sensors": self.sensors.snapshot(),
            "geodata": self.geodata.snapshot(),
        }
