"""An embeddable property-graph store with incremental schema.

Nodes and edges carry free-form scalar properties; new labels need no
declaration. Mutations append to a write-ahead log that is replayed at
startup, so links survive restarts. Concurrency contract: many readers or
one writer; every public operation is atomic.
"""

from __future__ import annotations

import json
from bisect import insort
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from geolink.errors import NotFoundError, StorageError, ValidationError
from geolink.graph import query
from geolink.graph.patterns import Binding, ChainPattern, is_scalar
from geolink.locks import RWLock


@dataclass(frozen=True)
class Node:
    id: str
    label: str
    properties: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    target: str
    label: str
    properties: dict = field(default_factory=dict)


def _check_label(label: str) -> None:
    if not label or not isinstance(label, str):
        raise ValidationError("label must be a non-empty string")
    if any(ch.isspace() for ch in label):
        # Labels are bare tokens in the mutation log.
        raise ValidationError(f"label {label!r} must not contain whitespace")


def _check_props(properties: dict) -> dict:
    if properties is None:
        return {}
    if not isinstance(properties, dict):
        raise ValidationError("properties must be a mapping")
    for key, value in properties.items():
        if not isinstance(key, str) or not key:
            raise ValidationError("property keys must be non-empty strings")
        if not is_scalar(value):
            raise ValidationError(f"property {key!r} must be a scalar (str/number/bool)")
    return dict(properties)


def _canonical(properties: dict) -> str:
    return json.dumps(properties, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


class PropertyGraph:
    def __init__(self, wal_path: str | Path | None = None):
        self._nodes: dict[str, Node] = {}
        self._edges: dict[str, Edge] = {}
        self._out: dict[str, list[str]] = {}
        self._in: dict[str, list[str]] = {}
        self._label_index: dict[str, list[str]] = {}
        self._node_seq = 0
        self._edge_seq = 0
        self._lock = RWLock()
        self._undo: list | None = None
        self._wal_buffer: list[str] | None = None
        self._wal_path = Path(wal_path) if wal_path else None
        self._wal_file = None
        if self._wal_path is not None:
            if self._wal_path.exists():
                self._replay(self._wal_path)
            self._wal_path.parent.mkdir(parents=True, exist_ok=True)
            self._wal_file = open(self._wal_path, "a", encoding="utf-8")

    # -- mutations ---------------------------------------------------------

    def add_node(self, label: str, properties: dict | None = None) -> str:
        _check_label(label)
        props = _check_props(properties)
        with self._lock.write():
            self._node_seq += 1
            node = Node(id=f"n{self._node_seq:08d}", label=label, properties=props)
            self._insert_node(node)
            self._log(f"ADD_NODE {node.id} {label} {_canonical(props)}")
            if self._undo is not None:
                self._undo.append(("node", node))
            return node.id

    def add_edge(self, source: str, target: str, label: str, properties: dict | None = None) -> str:
        _check_label(label)
        props = _check_props(properties)
        with self._lock.write():
            for node_id in (source, target):
                if node_id not in self._nodes:
                    raise NotFoundError(f"node {node_id} does not exist")
            self._edge_seq += 1
            edge = Edge(
                id=f"e{self._edge_seq:08d}", source=source, target=target,
                label=label, properties=props,
            )
            self._insert_edge(edge)
            self._log(f"ADD_EDGE {edge.id} {source} {target} {label} {_canonical(props)}")
            if self._undo is not None:
                self._undo.append(("edge", edge))
            return edge.id

    def remove_node(self, node_id: str) -> int:
        with self._lock.write():
            node = self._nodes.get(node_id)
            if node is None:
                raise NotFoundError(f"node {node_id} does not exist")
            incident = sorted(set(self._out.get(node_id, [])) | set(self._in.get(node_id, [])))
            removed_edges = [self._edges[eid] for eid in incident]
            for edge in removed_edges:
                self._drop_edge(edge)
            self._drop_node(node)
            self._log(f"REMOVE_NODE {node_id}")
            if self._undo is not None:
                self._undo.append(("removal", node, removed_edges))
            return len(removed_edges)

    def remove_edge(self, edge_id: str) -> None:
        with self._lock.write():
            edge = self._edges.get(edge_id)
            if edge is None:
                raise NotFoundError(f"edge {edge_id} does not exist")
            self._drop_edge(edge)
            self._log(f"REMOVE_EDGE {edge_id}")
            if self._undo is not None:
                self._undo.append(("edge_removal", edge))

    def ensure_node(self, label: str, match: dict, extra: dict | None = None) -> tuple[str, bool]:
        """Find the first node with ``label`` whose properties include
        ``match``; create it (with ``extra`` merged in) when absent."""
        _check_label(label)
        _check_props(match)
        with self._lock.write():
            found = self.find_nodes(label, match)
            if found:
                return found[0].id, False
        return self.add_node(label, {**match, **(extra or {})}), True

    def ensure_edge(self, source: str, target: str, label: str, properties: dict | None = None) -> tuple[str, bool]:
        """Add an edge unless one with the same (source, target, label)
        triple already exists."""
        with self._lock.write():
            for eid in self._out.get(source, []):
                edge = self._edges[eid]
                if edge.target == target and edge.label == label:
                    return eid, False
        return self.add_edge(source, target, label, properties), True

    # -- transactions ------------------------------------------------------

    @contextmanager
    def transaction(self):
        """Group mutations; on failure every applied change is undone and
        nothing reaches the write-ahead log."""
        with self._lock.write():
            if self._undo is not None:
                raise StorageError("transactions do not nest")
            self._undo = []
            self._wal_buffer = []
            try:
                yield self
            except BaseException:
                for entry in reversed(self._undo):
                    self._rollback(entry)
                raise
            else:
                for line in self._wal_buffer:
                    self._write_line(line)
                self._flush()
            finally:
                self._undo = None
                self._wal_buffer = None

    def apply(self, ops: list[dict]) -> dict[str, str]:
        """Apply a batch of declarative mutations atomically.

        Each op is one of ``ensure_node``, ``add_node``, ``ensure_edge``,
        ``add_edge``, ``remove_node``. Node ops may carry a ``ref`` name;
        edge endpoints written as ``@name`` resolve to that op's node id.
        Returns the ref-to-id map.
        """
        refs: dict[str, str] = {}

        def resolve(value: str) -> str:
            if isinstance(value, str) and value.startswith("@"):
                name = value[1:]
                if name not in refs:
                    raise ValidationError(f"unknown ref {value!r}")
                return refs[name]
            return value

        with self.transaction():
            for op in ops:
                kind = op.get("op")
                if kind == "ensure_node":
                    node_id, _ = self.ensure_node(op["label"], op.get("match", {}), op.get("props"))
                elif kind == "add_node":
                    node_id = self.add_node(op["label"], op.get("props"))
                elif kind in ("add_edge", "ensure_edge"):
                    src = resolve(op["source"])
                    dst = resolve(op["target"])
                    if kind == "add_edge":
                        self.add_edge(src, dst, op["label"], op.get("props"))
                    else:
                        self.ensure_edge(src, dst, op["label"], op.get("props"))
                    continue
                elif kind == "remove_node":
                    self.remove_node(resolve(op["id"]))
                    continue
                else:
                    raise ValidationError(f"unknown graph op {kind!r}")
                if op.get("ref"):
                    refs[op["ref"]] = node_id
        return refs

    # -- queries -----------------------------------------------------------

    def node(self, node_id: str) -> Node:
        with self._lock.read():
            node = self._nodes.get(node_id)
            if node is None:
                raise NotFoundError(f"node {node_id} does not exist")
            return node

    def edge(self, edge_id: str) -> Edge:
        with self._lock.read():
            edge = self._edges.get(edge_id)
            if edge is None:
                raise NotFoundError(f"edge {edge_id} does not exist")
            return edge

    def has_node(self, node_id: str) -> bool:
        with self._lock.read():
            return node_id in self._nodes

    def has_edge(self, edge_id: str) -> bool:
        with self._lock.read():
            return edge_id in self._edges

    def find_nodes(self, label: str, props: dict | None = None) -> list[Node]:
        """Nodes with ``label`` whose properties include ``props``; sorted by id."""
        with self._lock.read():
            out = []
            for node_id in self._label_index.get(label, []):
                node = self._nodes[node_id]
                if props and not all(node.properties.get(k) == v for k, v in props.items()):
                    continue
                out.append(node)
            return out

    def out_edges(self, node_id: str, label: str | None = None) -> list[Edge]:
        with self._lock.read():
            return [
                e for e in (self._edges[eid] for eid in self._out.get(node_id, []))
                if label is None or e.label == label
            ]

    def in_edges(self, node_id: str, label: str | None = None) -> list[Edge]:
        with self._lock.read():
            return [
                e for e in (self._edges[eid] for eid in self._in.get(node_id, []))
                if label is None or e.label == label
            ]

    def match_chain(self, pattern: ChainPattern) -> list[Binding]:
        with self._lock.read():
            return query.match_chain(self, pattern)

    def count_groups(self, pattern: ChainPattern, group_by_steps: list[int]) -> list[tuple[tuple[str, ...], int]]:
        with self._lock.read():
            return query.count_groups(self, pattern, group_by_steps)

    def find_path(
        self, from_id: str, to_label: str, edge_labels: set[str], max_hops: int
    ) -> list[str] | None:
        with self._lock.read():
            return query.find_path(self, from_id, to_label, edge_labels, max_hops)

    def stats(self) -> dict:
        with self._lock.read():
            return {"nodes": len(self._nodes), "edges": len(self._edges)}

    def snapshot(self) -> str:
        """Canonical JSON of the full graph state, for audits and diffing."""
        with self._lock.read():
            doc = {
                "nodes": [
                    {"id": n.id, "label": n.label, "properties": n.properties}
                    for n in (self._nodes[i] for i in sorted(self._nodes))
                ],
                "edges": [
                    {
                        "id": e.id, "source": e.source, "target": e.target,
                        "label": e.label, "properties": e.properties,
                    }
                    for e in (self._edges[i] for i in sorted(self._edges))
                ],
            }
            return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    def close(self) -> None:
        if self._wal_file is not None:
            self._wal_file.close()
            self._wal_file = None

    # -- internals ---------------------------------------------------------

    def _insert_node(self, node: Node) -> None:
        self._nodes[node.id] = node
        self._out.setdefault(node.id, [])
        self._in.setdefault(node.id, [])
        insort(self._label_index.setdefault(node.label, []), node.id)

    def _insert_edge(self, edge: Edge) -> None:
        self._edges[edge.id] = edge
        insort(self._out.setdefault(edge.source, []), edge.id)
        insort(self._in.setdefault(edge.target, []), edge.id)

    def _drop_edge(self, edge: Edge) -> None:
        del self._edges[edge.id]
        self._out[edge.source].remove(edge.id)
        self._in[edge.target].remove(edge.id)

    def _drop_node(self, node: Node) -> None:
        del self._nodes[node.id]
        self._out.pop(node.id, None)
        self._in.pop(node.id, None)
        self._label_index[node.label].remove(node.id)

    def _rollback(self, entry) -> None:
        kind = entry[0]
        if kind == "node":
            self._drop_node(entry[1])
        elif kind == "edge":
            self._drop_edge(entry[1])
        elif kind == "removal":
            _, node, edges = entry
            self._insert_node(node)
            for edge in edges:
                self._insert_edge(edge)
        elif kind == "edge_removal":
            self._insert_edge(entry[1])

    def _log(self, line: str) -> None:
        if self._wal_buffer is not None:
            self._wal_buffer.append(line)
        else:
            self._write_line(line)
            self._flush()

    def _write_line(self, line: str) -> None:
        if self._wal_file is not None:
            self._wal_file.write(line + "\n")

    def _flush(self) -> None:
        if self._wal_file is not None:
            self._wal_file.flush()

    def _replay(self, path: Path) -> None:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n")
                if not line:
                    continue
                try:
                    self._replay_line(line)
                except Exception as exc:
                    raise StorageError(f"{path}:{lineno}: bad log record ({exc})") from exc

    def _replay_line(self, line: str) -> None:
        op, _, rest = line.partition(" ")
        if op == "ADD_NODE":
            node_id, label, props_json = rest.split(" ", 2)
            node = Node(id=node_id, label=label, properties=json.loads(props_json))
            self._insert_node(node)
            self._node_seq = max(self._node_seq, int(node_id[1:]))
        elif op == "ADD_EDGE":
            edge_id, source, target, label, props_json = rest.split(" ", 4)
            edge = Edge(
                id=edge_id, source=source, target=target, label=label,
                properties=json.loads(props_json),
            )
            self._insert_edge(edge)
            self._edge_seq = max(self._edge_seq, int(edge_id[1:]))
        elif op == "REMOVE_NODE":
            node = self._nodes[rest]
            for eid in sorted(set(self._out.get(rest, [])) | set(self._in.get(rest, []))):
                self._drop_edge(self._edges[eid])
            self._drop_node(node)
        elif op == "REMOVE_EDGE":
            self._drop_edge(self._edges[rest])
        else:
            raise ValueError(f"unknown op {op!r}")
