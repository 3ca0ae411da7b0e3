"""Answers "which areas are restricted, when, and why".

Combines graph paths (topic -> document -> project -> area <- sensor),
live threshold checks against the sensor feed, single-hop overlap
inference between areas, and calendar-window grouping. Every result
carries the full explanation chain so a client can show why it holds
and open the source document at the exact sentence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from geolink.errors import StaleReferenceError, ValidationError
from geolink.sensors.feed import SensorFeed, SensorReading
from geolink.textpipe import model
from geolink.textpipe.pipeline import statement_from_edge_props
from geolink.textpipe.model import Statement

DEFAULT_MIN_OVERLAP = 0.05

WEATHER_TOPIC = "Weather"
TIME_TOPIC = "Time"


@dataclass(frozen=True)
class ChainLink:
    kind: str  # node | edge
    id: str
    label: str


@dataclass(frozen=True)
class ActiveRestriction:
    area_id: str  # graph node id
    area_name: str
    project_id: str
    project_name: str
    kind: str  # weather | time
    statement: Statement
    statement_edge_id: str
    inferred: bool
    chain: tuple[ChainLink, ...]
    reading: SensorReading | None = None
    unknown_stations: tuple[str, ...] = ()
    overlap: float | None = None

    def to_dict(self) -> dict:
        doc = {
            "areaId": self.area_name,
            "projectId": self.project_name,
            "kind": self.kind,
            "statement": self.statement.to_dict(),
            "inferred": self.inferred,
            "explanation": {
                "chain": [
                    {"kind": link.kind, "id": link.id, "label": link.label}
                    for link in self.chain
                ],
                "unknownStations": list(self.unknown_stations),
            },
        }
        if self.reading is not None:
            doc["explanation"]["reading"] = self.reading.to_dict()
        if self.overlap is not None:
            doc["explanation"]["overlapFraction"] = self.overlap
        return doc


@dataclass
class WeatherEvaluation:
    active: list[ActiveRestriction] = field(default_factory=list)
    unverifiable: list[ActiveRestriction] = field(default_factory=list)


class RestrictionEngine:
    def __init__(self, graph, feed: SensorFeed, min_overlap: float = DEFAULT_MIN_OVERLAP):
        self.graph = graph
        self.feed = feed
        self.min_overlap = min_overlap

    # -- weather ------------------------------------------------------------

    def evaluate_weather(self, at: datetime) -> WeatherEvaluation:
        """Walk every weather statement to its areas and check sensors.

        A restriction is active when ANY applicable sensor exceeds the
        threshold. Sensors without usable data are reported; if no sensor
        confirms and at least one is unknown, the restriction lands in the
        unverifiable list instead of being silently dropped.
        """
        result = WeatherEvaluation()
        seen: set[tuple[str, str]] = set()  # one verdict per (statement, area)
        for topic in self.graph.find_nodes("Topic", {"name": WEATHER_TOPIC}):
            for stated in self.graph.out_edges(topic.id, "STATED_IN"):
                doc_node = self.graph.node(stated.target)
                statement = statement_from_edge_props(
                    stated.properties, doc_node.properties.get("name", doc_node.id)
                )
                if statement.category != model.WEATHER:
                    continue
                for part in self.graph.out_edges(doc_node.id, "PART_OF"):
                    project = self.graph.node(part.target)
                    for has_area in self.graph.out_edges(project.id, "HAS_AREA"):
                        area = self.graph.node(has_area.target)
                        if (stated.id, area.id) in seen:
                            continue
                        seen.add((stated.id, area.id))
                        self._evaluate_area(
                            result, at, statement, stated,
                            chain_prefix=(
                                ChainLink("node", topic.id, "Topic"),
                                ChainLink("edge", stated.id, "STATED_IN"),
                                ChainLink("node", doc_node.id, "Document"),
                                ChainLink("edge", part.id, "PART_OF"),
                                ChainLink("node", project.id, "Project"),
                                ChainLink("edge", has_area.id, "HAS_AREA"),
                                ChainLink("node", area.id, "Area"),
                            ),
                            project=project,
                            area=area,
                        )
        return result

    def _evaluate_area(self, result, at, statement, stated, chain_prefix, project, area):
        confirming = None
        unknown: list[tuple[str, str]] = []  # (sensor node id, station name)
        applies_edges = []
        for applies in self.graph.in_edges(area.id, "APPLIES_TO"):
            sensor = self.graph.node(applies.source)
            params = str(sensor.properties.get("parameters", "")).split(",")
            if statement.parameter not in params:
                continue
            station = str(sensor.properties.get("name", sensor.id))
            verdict = self.feed.exceeds(
                station, statement.parameter, statement.comparator, statement.threshold, at
            )
            if verdict is True and confirming is None:
                confirming = (applies, sensor, station)
            elif verdict is None:
                unknown.append((sensor.id, station))
            applies_edges.append(applies.id)
        base = dict(
            area_id=area.id,
            area_name=str(area.properties.get("name", area.id)),
            project_id=project.id,
            project_name=str(project.properties.get("name", project.id)),
            kind="weather",
            statement=statement,
            statement_edge_id=stated.id,
            inferred=False,
            unknown_stations=tuple(station for _, station in unknown),
        )
        if confirming is not None:
            applies, sensor, station = confirming
            reading = self.feed.latest_value(station, statement.parameter, at)
            result.active.append(
                ActiveRestriction(
                    **base,
                    chain=chain_prefix
                    + (
                        ChainLink("edge", applies.id, "APPLIES_TO"),
                        ChainLink("node", sensor.id, "Sensor"),
                    ),
                    reading=reading,
                )
            )
        elif unknown:
            sensor_id, station = unknown[0]
            result.unverifiable.append(
                ActiveRestriction(
                    **base,
                    chain=chain_prefix
                    + (
                        ChainLink("edge", applies_edges[0], "APPLIES_TO"),
                        ChainLink("node", sensor_id, "Sensor"),
                    ),
                )
            )

    def active_weather_restrictions(self, at: datetime) -> list[ActiveRestriction]:
        return self.evaluate_weather(at).active

    # -- overlap inference ---------------------------------------------------

    def inferred_restrictions(
        self, at: datetime, min_overlap: float | None = None
    ) -> list[ActiveRestriction]:
        """Propagate each direct restriction across one OVERLAPS hop.

        An area covered (at fraction >= min_overlap) by a directly
        restricted area inherits the restriction unless the same statement
        already restricts it directly. Inference is deliberately single-hop.
        """
        threshold = self.min_overlap if min_overlap is None else min_overlap
        if not (0.0 < threshold <= 1.0):
            raise ValidationError("minOverlap must be in (0, 1]")
        direct = self.active_weather_restrictions(at)
        direct_keys = {(r.statement_edge_id, r.area_id) for r in direct}
        emitted: set[tuple[str, str]] = set()
        out: list[ActiveRestriction] = []
        for restriction in direct:
            for overlap_edge in self.graph.out_edges(restriction.area_id, "OVERLAPS"):
                fraction = float(overlap_edge.properties.get("fraction", 0.0))
                if fraction < threshold:
                    continue
                target_id = overlap_edge.target
                key = (restriction.statement_edge_id, target_id)
                if key in direct_keys or key in emitted:
                    continue
                emitted.add(key)
                target = self.graph.node(target_id)
                project_name = restriction.project_name
                project_id = restriction.project_id
                owners = self.graph.in_edges(target_id, "HAS_AREA")
                if owners:
                    owner = self.graph.node(owners[0].source)
                    project_id = owner.id
                    project_name = str(owner.properties.get("name", owner.id))
                out.append(
                    ActiveRestriction(
                        area_id=target_id,
                        area_name=str(target.properties.get("name", target_id)),
                        project_id=project_id,
                        project_name=project_name,
                        kind="weather",
                        statement=restriction.statement,
                        statement_edge_id=restriction.statement_edge_id,
                        inferred=True,
                        chain=restriction.chain
                        + (
                            ChainLink("edge", overlap_edge.id, "OVERLAPS"),
                            ChainLink("node", target_id, "Area"),
                        ),
                        reading=restriction.reading,
                        overlap=fraction,
                    )
                )
        return out

    # -- calendar windows ------------------------------------------------------

    def time_restrictions_by_month(self) -> dict[int, list[tuple[str, Statement]]]:
        """Month -> [(project name, statement)]; every month key present."""
        by_month: dict[int, list[tuple[str, Statement]]] = {m: [] for m in range(1, 13)}
        for topic in self.graph.find_nodes("Topic", {"name": TIME_TOPIC}):
            for stated in self.graph.out_edges(topic.id, "STATED_IN"):
                doc_node = self.graph.node(stated.target)
                statement = statement_from_edge_props(
                    stated.properties, doc_node.properties.get("name", doc_node.id)
                )
                if statement.category != model.TIME:
                    continue
                for part in self.graph.out_edges(doc_node.id, "PART_OF"):
                    project = self.graph.node(part.target)
                    name = str(project.properties.get("name", project.id))
                    for month in statement.months:
                        by_month[month].append((name, statement))
        for month, entries in by_month.items():
            entries.sort(
                key=lambda e: (
                    e[0],
                    e[1].sentence.document_id,
                    e[1].sentence.page,
                    e[1].sentence.start_offset,
                )
            )
        return by_month

    # -- explanations -----------------------------------------------------------

    def explain(self, restriction: ActiveRestriction) -> dict:
        """Resolve the chain against the live graph; raises when any part
        of it has been removed since the restriction was produced."""
        resolved = []
        for link in restriction.chain:
            if link.kind == "node":
                if not self.graph.has_node(link.id):
                    raise StaleReferenceError(f"node {link.id} no longer exists")
                node = self.graph.node(link.id)
                resolved.append(
                    {
                        "kind": "node",
                        "id": link.id,
                        "label": node.label,
                        "name": node.properties.get("name", link.id),
                    }
                )
            else:
                if not self.graph.has_edge(link.id):
                    raise StaleReferenceError(f"edge {link.id} no longer exists")
                resolved.append({"kind": "edge", "id": link.id, "label": link.label})
        sentence = restriction.statement.sentence
        record = {
            "chain": resolved,
            "statement": restriction.statement.to_dict(),
            "document": {
                "id": sentence.document_id,
                "page": sentence.page,
                "startOffset": sentence.start_offset,
                "endOffset": sentence.end_offset,
            },
            "unknownStations": list(restriction.unknown_stations),
        }
        if restriction.kind == "weather" and restriction.reading is not None:
            record["reading"] = restriction.reading.to_dict()
        if restriction.inferred:
            record["overlapFraction"] = restriction.overlap
        return record
