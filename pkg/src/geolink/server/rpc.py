"""Loopback JSON-RPC used by the multi-process topology.

Each worker process hosts exactly one store behind ``POST /rpc``; the
gateway talks to it through a proxy exposing the same Python interface
as the in-process store. One codec table per store is shared by both
sides, so wire format and interface cannot drift apart.
"""

from __future__ import annotations

import json
import threading
import urllib.request
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable

from geolink import errors
from geolink.graph.patterns import Binding, ChainPattern, EdgeStep, NodeStep
from geolink.graph.store import Edge, Node
from geolink.index.inverted import SearchHit
from geolink.sensors.feed import ReadingsReport, SensorReading, parse_instant
from geolink.textpipe.model import Sentence
from geolink.textpipe.store import StoredDocument

# ---------------------------------------------------------------------------
# codecs


@dataclass(frozen=True)
class Codec:
    enc: Callable
    dec: Callable


RAW = Codec(lambda v: v, lambda v: v)


def list_of(codec: Codec) -> Codec:
    return Codec(
        lambda vs: [codec.enc(v) for v in vs],
        lambda vs: [codec.dec(v) for v in vs],
    )


def optional(codec: Codec) -> Codec:
    return Codec(
        lambda v: None if v is None else codec.enc(v),
        lambda v: None if v is None else codec.dec(v),
    )


NODE = Codec(
    lambda n: {"id": n.id, "label": n.label, "properties": n.properties},
    lambda d: Node(id=d["id"], label=d["label"], properties=d["properties"]),
)

EDGE = Codec(
    lambda e: {
        "id": e.id, "source": e.source, "target": e.target,
        "label": e.label, "properties": e.properties,
    },
    lambda d: Edge(
        id=d["id"], source=d["source"], target=d["target"],
        label=d["label"], properties=d["properties"],
    ),
)

PATTERN = Codec(
    lambda p: [
        {"type": "node", "label": s.label, "props": [list(kv) for kv in s.props]}
        if isinstance(s, NodeStep)
        else {"type": "edge", "label": s.label, "direction": s.direction}
        for s in p.steps
    ],
    lambda steps: ChainPattern(
        steps=tuple(
            NodeStep(label=s["label"], props=tuple((k, v) for k, v in s["props"]))
            if s["type"] == "node"
            else EdgeStep(label=s["label"], direction=s["direction"])
            for s in steps
        )
    ),
)

BINDING = Codec(
    lambda b: list(b.assignment),
    lambda a: Binding(assignment=tuple(a)),
)

GROUPS = Codec(
    lambda groups: [[list(key), count] for key, count in groups],
    lambda groups: [(tuple(key), count) for key, count in groups],
)

PAIR = Codec(lambda p: list(p), lambda p: tuple(p))

SENTENCE = Codec(lambda s: s.to_dict(), Sentence.from_dict)

HIT = Codec(
    lambda h: {
        "documentId": h.document_id,
        "projectId": h.project_id,
        "sentence": h.sentence.to_dict(),
        "score": h.score,
    },
    lambda d: SearchHit(
        document_id=d["documentId"],
        project_id=d["projectId"],
        sentence=Sentence.from_dict(d["sentence"]),
        score=d["score"],
    ),
)

STORED_DOC = Codec(lambda d: d.to_dict(), StoredDocument.from_dict)

INSTANT = Codec(
    lambda t: t.isoformat(),
    parse_instant,
)

READING = Codec(
    lambda r: r.to_dict(),
    lambda d: SensorReading(
        station_id=d["station"],
        parameter=d["parameter"],
        timestamp=parse_instant(d["timestamp"]),
        value=d["value"],
        unit=d["unit"],
    ),
)

READINGS_REPORT = Codec(
    lambda r: {"accepted": r.accepted, "rejected": [[n, reason] for n, reason in r.rejected]},
    lambda d: ReadingsReport(
        accepted=d["accepted"], rejected=[(n, reason) for n, reason in d["rejected"]]
    ),
)

STR_SET = Codec(lambda s: sorted(s), lambda vs: set(vs))
OPT_STR_SET = optional(STR_SET)

# method -> (argument codecs, result codec)
GRAPH_API: dict[str, tuple[tuple[Codec, ...], Codec]] = {
    "add_node": ((RAW, RAW), RAW),
    "add_edge": ((RAW, RAW, RAW, RAW), RAW),
    "remove_node": ((RAW,), RAW),
    "remove_edge": ((RAW,), RAW),
    "ensure_node": ((RAW, RAW, RAW), PAIR),
    "ensure_edge": ((RAW, RAW, RAW, RAW), PAIR),
    "apply": ((RAW,), RAW),
    "node": ((RAW,), NODE),
    "edge": ((RAW,), EDGE),
    "has_node": ((RAW,), RAW),
    "has_edge": ((RAW,), RAW),
    "find_nodes": ((RAW, RAW), list_of(NODE)),
    "out_edges": ((RAW, RAW), list_of(EDGE)),
    "in_edges": ((RAW, RAW), list_of(EDGE)),
    "match_chain": ((PATTERN,), list_of(BINDING)),
    "count_groups": ((PATTERN, RAW), GROUPS),
    "find_path": ((RAW, RAW, STR_SET, RAW), RAW),
    "stats": ((), RAW),
    "snapshot": ((), RAW),
}

INDEX_API = {
    "index_sentence": ((SENTENCE, RAW), RAW),
    "search": ((RAW, OPT_STR_SET, RAW), list_of(HIT)),
    "remove_document": ((RAW,), RAW),
    "stats": ((), RAW),
    "snapshot": ((), RAW),
}

DOCUMENTS_API = {
    "exists": ((RAW,), RAW),
    "put": ((STORED_DOC,), RAW),
    "delete": ((RAW,), RAW),
    "get": ((RAW,), STORED_DOC),
    "ids": ((), RAW),
    "by_project": ((RAW,), list_of(STORED_DOC)),
    "all": ((), list_of(STORED_DOC)),
    "snapshot": ((), RAW),
}

SENSORS_API = {
    "ingest_readings": ((RAW,), READINGS_REPORT),
    "ingest_readings_text": ((RAW,), READINGS_REPORT),
    "latest_value": ((RAW, RAW, INSTANT), optional(READING)),
    "exceeds": ((RAW, RAW, RAW, RAW, INSTANT), RAW),
    "series_keys": ((), Codec(lambda ks: [list(k) for k in ks], lambda ks: [tuple(k) for k in ks])),
    "snapshot": ((), RAW),
}

GEODATA_API = {
    "add_areas": ((RAW,), RAW),
    "delete_areas": ((RAW,), RAW),
    "area": ((RAW,), RAW),
    "areas": ((), RAW),
    "add_stations": ((RAW,), RAW),
    "delete_stations": ((RAW,), RAW),
    "stations": ((), RAW),
    "snapshot": ((), RAW),
}

APIS = {
    "graph": GRAPH_API,
    "index": INDEX_API,
    "documents": DOCUMENTS_API,
    "sensors": SENSORS_API,
    "geodata": GEODATA_API,
}

_ERROR_TYPES = {
    cls.__name__: cls
    for cls in (
        errors.ValidationError,
        errors.NotFoundError,
        errors.ConflictError,
        errors.ResourceError,
        errors.StaleReferenceError,
        errors.StorageError,
        errors.AuthenticationError,
        errors.RateLimitError,
    )
}

# ---------------------------------------------------------------------------
# worker server


class WorkerServer:
    """Hosts one store on a loopback-only socket."""

    def __init__(self, store, api_name: str, port: int = 0):
        self.store = store
        self.api = APIS[api_name]
        server = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):  # quiet
                pass

            def do_GET(self):
                if self.path == "/health":
                    self._respond(200, {"ok": True})
                else:
                    self._respond(404, {"ok": False, "error": {"type": "NotFoundError", "message": "unknown path"}})

            def do_POST(self):
                if self.path != "/rpc":
                    self._respond(404, {"ok": False, "error": {"type": "NotFoundError", "message": "unknown path"}})
                    return
                length = int(self.headers.get("Content-Length", "0"))
                try:
                    request = json.loads(self.rfile.read(length))
                    self._respond(200, server._dispatch(request))
                except Exception as exc:  # noqa: BLE001 - totality at the boundary
                    self._respond(
                        200,
                        {"ok": False, "error": {"type": type(exc).__name__, "message": str(exc)}},
                    )

            def _respond(self, status: int, doc: dict):
                body = json.dumps(doc, ensure_ascii=False).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

        self.httpd = ThreadingHTTPServer(("127.0.0.1", port), Handler)
        self.httpd.daemon_threads = True

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    def _dispatch(self, request: dict) -> dict:
        method = request.get("method")
        spec = self.api.get(method)
        if spec is None:
            return {"ok": False, "error": {"type": "ValidationError", "message": f"unknown method {method!r}"}}
        arg_codecs, result_codec = spec
        raw_args = request.get("args", [])
        if len(raw_args) != len(arg_codecs):
            return {
                "ok": False,
                "error": {"type": "ValidationError", "message": f"{method} takes {len(arg_codecs)} args"},
            }
        try:
            args = [codec.dec(raw) for codec, raw in zip(arg_codecs, raw_args)]
            result = getattr(self.store, method)(*args)
            return {"ok": True, "result": result_codec.enc(result)}
        except errors.GeolinkError as exc:
            return {"ok": False, "error": {"type": type(exc).__name__, "message": str(exc)}}

    def serve_forever(self):
        self.httpd.serve_forever()

    def start_in_thread(self) -> threading.Thread:
        thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        thread.start()
        return thread

    def shutdown(self):
        self.httpd.shutdown()
        self.httpd.server_close()


# ---------------------------------------------------------------------------
# client proxy


class RpcProxy:
    """Looks like the wrapped store; every call is one loopback request."""

    def __init__(self, base_url: str, api_name: str, timeout_s: float = 30.0):
        self._base_url = base_url.rstrip("/")
        self._api = APIS[api_name]
        self._timeout = timeout_s

    def __getattr__(self, name: str):
        spec = self._api.get(name)
        if spec is None:
            raise AttributeError(name)

        def call(*args):
            arg_codecs, result_codec = spec
            if len(args) < len(arg_codecs):
                # Every optional store argument defaults to None.
                args = args + (None,) * (len(arg_codecs) - len(args))
            payload = json.dumps(
                {"method": name, "args": [c.enc(a) for c, a in zip(arg_codecs, args)]},
                ensure_ascii=False,
            ).encode("utf-8")
            request = urllib.request.Request(
                f"{self._base_url}/rpc",
                data=payload,
                headers={"Content-Type": "application/json"},
                method="POST",
            )
            with urllib.request.urlopen(request, timeout=self._timeout) as response:
                doc = json.loads(response.read())
            if doc.get("ok"):
                return result_codec.dec(doc["result"])
            error = doc.get("error", {})
            exc_type = _ERROR_TYPES.get(error.get("type"), errors.StorageError)
            raise exc_type(error.get("message", "worker call failed"))

        return call
