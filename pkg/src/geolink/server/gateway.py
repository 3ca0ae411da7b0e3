"""The single externally reachable gateway.

Authenticates every request, routes it to the owning module, filters the
response down to what the caller's rights allow, and aggregates where the
client should only see the aggregate. Every response is an ApiEnvelope:
exactly one of ``data``/``error``, plus the elapsed time.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

from geolink.errors import (
    GeolinkError,
    NotFoundError,
    ValidationError,
)
from geolink.geo.ops import aggregate_heatmap
from geolink.geo.types import GridSpec
from geolink.geo.geojson import _parse_feature
from geolink.graph.patterns import chain, into, node, out
from geolink.sensors.feed import parse_instant
from geolink.server.auth import AccountStore, LoginRateLimiter, TokenService
from geolink.server.backend import Backend

_STATUS_BY_CODE = {
    "validation": 400,
    "auth": 401,
    "not_found": 404,
    "conflict": 409,
    "stale": 409,
    "resource": 400,
    "rate_limited": 429,
}

# Field allowlists: what a document object may expose per privilege level.
DOC_FIELDS_BASE = ("id", "project", "title", "pageCount", "statementCount")
DOC_FIELDS_CONFIDENTIAL = ("confidential", "source")
SOURCE_FIELDS_BASE = ("id", "project", "title", "pages")


@dataclass(frozen=True)
class ApiRequest:
    method: str
    path: str
    query: dict[str, str] = field(default_factory=dict)
    body: dict | None = None
    token: str | None = None


@dataclass(frozen=True)
class Route:
    method: str
    segments: tuple[str, ...]  # "{name}" captures a path parameter
    required_right: str | None  # None = unauthenticated (login only)
    handler: str

    @property
    def path(self) -> str:
        return "/" + "/".join(self.segments)


ROUTES = (
    Route("POST", ("auth", "login"), None, "login"),
    Route("GET", ("projects",), "read_projects", "list_projects"),
    Route("GET", ("projects", "{id}", "documents"), "read_documents", "project_documents"),
    Route("GET", ("documents", "{id}", "statements"), "read_documents", "document_statements"),
    Route("GET", ("documents", "{id}", "source"), "read_documents", "document_source"),
    Route("GET", ("search",), "read_documents", "search"),
    Route("GET", ("graph", "cooccurrence"), "read_projects", "cooccurrence"),
    Route("GET", ("graph", "pair-frequencies"), "read_projects", "pair_frequencies"),
    Route("GET", ("restrictions", "active"), "read_restrictions", "restrictions_active"),
    Route("GET", ("restrictions", "inferred"), "read_restrictions", "restrictions_inferred"),
    Route("GET", ("restrictions", "by-month"), "read_restrictions", "restrictions_by_month"),
    Route("GET", ("areas",), "read_projects", "list_areas"),
    Route("GET", ("heatmap",), "read_projects", "heatmap"),
    Route("GET", ("sensors", "{station}", "{parameter}", "latest"), "read_sensors", "sensor_latest"),
    Route("POST", ("ingest", "document"), "ingest", "ingest_document"),
    Route("POST", ("ingest", "areas"), "ingest", "ingest_areas"),
    Route("POST", ("ingest", "stations"), "ingest", "ingest_stations"),
    Route("POST", ("ingest", "readings"), "ingest", "ingest_readings"),
    Route("POST", ("admin", "revoke"), "admin", "revoke_token"),
)


class Gateway:
    def __init__(
        self,
        backend: Backend,
        accounts: AccountStore,
        tokens: TokenService,
        rate_limiter: LoginRateLimiter | None = None,
    ):
        self.backend = backend
        self.accounts = accounts
        self.tokens = tokens
        self.rate_limiter = rate_limiter or LoginRateLimiter()
        self.routes = ROUTES

    # -- dispatch ---------------------------------------------------------------

    def handle(self, request: ApiRequest) -> tuple[int, dict]:
        started = time.perf_counter()

        def envelope(status: int, data=None, error=None) -> tuple[int, dict]:
            elapsed = round((time.perf_counter() - started) * 1000.0, 3)
            doc = {"status": "ok" if error is None else "error", "elapsedMs": elapsed}
            if error is None:
                doc["data"] = data
            else:
                doc["error"] = error
            return status, doc

        try:
            route, params = self._match(request.method, request.path)
            if route is None:
                return envelope(404, error={"code": "not_found", "message": "unknown route"})
            rights: frozenset[str] = frozenset()
            if route.required_right is not None:
                decision = self.tokens.authorize(request.token or "", route.required_right)
                if not decision.allowed:
                    if decision.reason == "insufficient_rights":
                        return envelope(
                            403,
                            error={"code": "forbidden", "message": "insufficient rights"},
                        )
                    return envelope(
                        401,
                        error={"code": "unauthorized", "message": f"token {decision.reason}"},
                    )
                rights = decision.payload.rights
            handler = getattr(self, f"_h_{route.handler}")
            data = handler(request, params, rights)
            return envelope(200, data=data)
        except GeolinkError as exc:
            status = _STATUS_BY_CODE.get(exc.code, 500)
            message = str(exc) if status != 500 else "internal error"
            return envelope(status, error={"code": exc.code, "message": message})
        except Exception:  # noqa: BLE001 - envelope totality
            return envelope(500, error={"code": "internal", "message": "internal error"})

    def _match(self, method: str, path: str):
        parts = tuple(p for p in path.strip("/").split("/") if p != "")
        for route in self.routes:
            if route.method != method or len(route.segments) != len(parts):
                continue
            params = {}
            for pattern, actual in zip(route.segments, parts):
                if pattern.startswith("{") and pattern.endswith("}"):
                    params[pattern[1:-1]] = actual
                elif pattern != actual:
                    break
            else:
                return route, params
        return None, {}

    # -- handlers -----------------------------------------------------------------

    def _h_login(self, request: ApiRequest, params, rights):
        body = request.body or {}
        username = body.get("username")
        password = body.get("password")
        if not isinstance(username, str) or not isinstance(password, str):
            raise ValidationError("username and password are required")
        self.rate_limiter.check(username)
        account = self.accounts.verify(username, password)
        token = self.tokens.issue(account.username, account.rights)
        return {"token": token, "rights": sorted(account.rights)}

    def _h_list_projects(self, request, params, rights):
        projects = self.backend.graph.find_nodes("Project", None)
        return {
            "projects": [
                {"id": p.properties.get("name", p.id), "name": p.properties.get("name", p.id)}
                for p in projects
            ]
        }

    def _can_see(self, record, rights) -> bool:
        return not record.confidential or "read_confidential" in rights

    def _h_project_documents(self, request, params, rights):
        docs = self.backend.documents.by_project(params["id"])
        visible = [d for d in docs if self._can_see(d.record, rights)]
        return {"documents": [_document_summary(d, rights) for d in visible]}

    def _get_visible_document(self, document_id: str, rights):
        stored = self.backend.documents.get(document_id)  # NotFoundError -> 404
        if not self._can_see(stored.record, rights):
            raise _Forbidden()
        return stored

    def _h_document_statements(self, request, params, rights):
        stored = self._get_visible_document(params["id"], rights)
        return {
            "documentId": stored.record.id,
            "statements": [s.to_dict() for s in stored.statements],
        }

    def _h_document_source(self, request, params, rights):
        stored = self._get_visible_document(params["id"], rights)
        record = stored.record
        doc = {
            "id": record.id,
            "project": record.project_id,
            "title": record.title,
            "pages": list(record.pages),
        }
        if "read_confidential" in rights:
            doc["confidential"] = record.confidential
            doc["source"] = record.source_uri
        return doc

    def _h_search(self, request, params, rights):
        query = request.query.get("q", "")
        limit = _int_param(request.query, "limit", default=20, minimum=1)
        project_filter = None
        if request.query.get("projects"):
            project_filter = {p for p in request.query["projects"].split(",") if p}
        total = self.backend.index.stats()["sentenceCount"]
        hits = self.backend.index.search(query, project_filter, max(total, 1))
        visible = []
        confidential_cache: dict[str, bool] = {}
        for hit in hits:
            if hit.document_id not in confidential_cache:
                try:
                    record = self.backend.documents.get(hit.document_id).record
                    confidential_cache[hit.document_id] = record.confidential
                except NotFoundError:
                    confidential_cache[hit.document_id] = True
            if confidential_cache[hit.document_id] and "read_confidential" not in rights:
                continue
            visible.append(
                {
                    "documentId": hit.document_id,
                    "projectId": hit.project_id,
                    "page": hit.sentence.page,
                    "startOffset": hit.sentence.start_offset,
                    "endOffset": hit.sentence.end_offset,
                    "text": hit.sentence.text,
                    "score": hit.score,
                }
            )
            if len(visible) >= limit:
                break
        return {"hits": visible}

    def _h_cooccurrence(self, request, params, rights):
        person = request.query.get("person")
        company = request.query.get("company")
        if not person or not company:
            raise ValidationError("person and company query parameters are required")
        pattern = chain(
            node("Person", name=person),
            out("APPEARS_IN"),
            node("Project"),
            into("APPEARS_IN"),
            node("Company", name=company),
        )
        bindings = self.backend.graph.match_chain(pattern)
        names = sorted(
            {
                self.backend.graph.node(b.assignment[2]).properties.get("name", b.assignment[2])
                for b in bindings
            }
        )
        return {"projects": names}

    def _h_pair_frequencies(self, request, params, rights):
        pattern = chain(
            node("Person"),
            out("APPEARS_IN"),
            node("Project"),
            into("APPEARS_IN"),
            node("Company"),
        )
        groups = self.backend.graph.count_groups(pattern, [0, 4])
        pairs = []
        for (person_id, company_id), count in groups:
            person = self.backend.graph.node(person_id)
            company = self.backend.graph.node(company_id)
            pairs.append(
                {
                    "person": person.properties.get("name", person_id),
                    "company": company.properties.get("name", company_id),
                    "count": count,
                }
            )
        return {"pairs": pairs}

    def _at_param(self, query) -> datetime:
        raw = query.get("at")
        if not raw:
            return datetime.now(timezone.utc)
        try:
            return parse_instant(raw)
        except ValueError as exc:
            raise ValidationError(f"bad 'at' timestamp: {raw!r}") from exc

    def _h_restrictions_active(self, request, params, rights):
        at = self._at_param(request.query)
        evaluation = self.backend.engine.evaluate_weather(at)
        return {
            "at": at.isoformat().replace("+00:00", "Z"),
            "active": [self._restriction_record(r) for r in evaluation.active],
            "unverifiable": [self._restriction_record(r) for r in evaluation.unverifiable],
        }

    def _h_restrictions_inferred(self, request, params, rights):
        at = self._at_param(request.query)
        min_overlap = None
        if request.query.get("minOverlap"):
            try:
                min_overlap = float(request.query["minOverlap"])
            except ValueError as exc:
                raise ValidationError("minOverlap must be a number") from exc
        inferred = self.backend.engine.inferred_restrictions(at, min_overlap)
        return {
            "at": at.isoformat().replace("+00:00", "Z"),
            "inferred": [self._restriction_record(r) for r in inferred],
        }

    def _restriction_record(self, restriction) -> dict:
        doc = restriction.to_dict()
        doc["explanation"] = self.backend.engine.explain(restriction)
        return doc

    def _h_restrictions_by_month(self, request, params, rights):
        by_month = self.backend.engine.time_restrictions_by_month()
        return {
            "months": {
                str(month): [
                    {"projectId": project, "statement": statement.to_dict()}
                    for project, statement in entries
                ]
                for month, entries in by_month.items()
            }
        }

    def _h_list_areas(self, request, params, rights):
        return {"type": "FeatureCollection", "features": self.backend.geodata.areas()}

    def _h_heatmap(self, request, params, rights):
        bbox_raw = request.query.get("bbox", "")
        parts = bbox_raw.split(",")
        if len(parts) != 4:
            raise ValidationError("bbox must be lonMin,latMin,lonMax,latMax")
        try:
            lon_min, lat_min, lon_max, lat_max = (float(p) for p in parts)
            cell = float(request.query.get("cell", ""))
        except ValueError as exc:
            raise ValidationError("bbox and cell must be numeric") from exc
        categories = None
        if request.query.get("categories"):
            categories = {c for c in request.query["categories"].split(",") if c}
        grid = GridSpec(
            lon_min=lon_min, lat_min=lat_min, lon_max=lon_max, lat_max=lat_max, cell_size=cell
        )
        polygons = [_parse_feature(f, i) for i, f in enumerate(self.backend.geodata.areas())]
        layer = aggregate_heatmap(polygons, categories, grid)
        return {
            "grid": {
                "bbox": [lon_min, lat_min, lon_max, lat_max],
                "cellSize": cell,
                "cols": grid.cols,
                "rows": grid.rows,
            },
            "values": layer.values,
        }

    def _h_sensor_latest(self, request, params, rights):
        at = self._at_param(request.query)
        reading = self.backend.sensors.latest_value(params["station"], params["parameter"], at)
        return {"reading": None if reading is None else reading.to_dict()}

    def _content_body(self, request) -> str:
        body = request.body or {}
        content = body.get("content")
        if not isinstance(content, str) or not content:
            raise ValidationError("body must be {\"content\": \"<file text>\"}")
        return content

    def _h_ingest_document(self, request, params, rights):
        report = self.backend.ingest_document_text(self._content_body(request))
        return report.to_dict()

    def _h_ingest_areas(self, request, params, rights):
        return self.backend.ingest_areas_text(self._content_body(request))

    def _h_ingest_stations(self, request, params, rights):
        return self.backend.ingest_stations_text(self._content_body(request))

    def _h_ingest_readings(self, request, params, rights):
        report = self.backend.ingest_readings_text(self._content_body(request))
        return {
            "accepted": report.accepted,
            "rejected": [{"line": line, "reason": reason} for line, reason in report.rejected],
        }

    def _h_revoke_token(self, request, params, rights):
        body = request.body or {}
        token = body.get("token")
        if not isinstance(token, str) or not token:
            raise ValidationError("body must be {\"token\": \"...\"}")
        self.tokens.revoke(token)
        return {"revoked": True}


class _Forbidden(GeolinkError):
    code = "forbidden"

    def __init__(self):
        super().__init__("insufficient rights")


_STATUS_BY_CODE["forbidden"] = 403


def _document_summary(stored, rights) -> dict:
    record = stored.record
    doc = {
        "id": record.id,
        "project": record.project_id,
        "title": record.title,
        "pageCount": len(record.pages),
        "statementCount": len(stored.statements),
    }
    if "read_confidential" in rights:
        doc["confidential"] = record.confidential
        doc["source"] = record.source_uri
    return doc


def _int_param(query: dict, name: str, default: int, minimum: int) -> int:
    raw = query.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValidationError(f"{name} must be an integer") from exc
    if value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}")
    return value
