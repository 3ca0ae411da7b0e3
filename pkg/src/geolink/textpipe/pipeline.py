"""Document ingest: segment, classify, extract, then commit atomically.

The computation phase is pure; the commit phase touches the document
store, the sentence index, and the graph. Any failure rolls the partial
commit back so queries never observe a half-ingested document.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from geolink.errors import ConflictError, GeolinkError, StorageError
from geolink.textpipe import model
from geolink.textpipe.classify import DEFAULT_LEXICON, Lexicon, classify
from geolink.textpipe.entities import EntityRules, extract_entities
from geolink.textpipe.model import DocumentRecord, Statement
from geolink.textpipe.segment import segment_document
from geolink.textpipe.store import DocumentStore, StoredDocument

TOPIC_BY_CATEGORY = {model.WEATHER: "Weather", model.TIME: "Time"}


@dataclass
class IngestReport:
    document_id: str
    sentences: int
    statements: dict[str, int] = field(default_factory=dict)
    entities: int = 0

    def to_dict(self) -> dict:
        return {
            "documentId": self.document_id,
            "sentences": self.sentences,
            "statements": dict(self.statements),
            "entities": self.entities,
        }


class DocumentPipeline:
    def __init__(
        self,
        graph,
        index,
        documents: DocumentStore,
        lexicon: Lexicon = DEFAULT_LEXICON,
        entity_rules: EntityRules | None = None,
    ):
        self.graph = graph
        self.index = index
        self.documents = documents
        self.lexicon = lexicon
        self.entity_rules = entity_rules or EntityRules()
        self._commit_lock = threading.Lock()

    def ingest(self, record: DocumentRecord) -> IngestReport:
        if self.documents.exists(record.id):
            raise ConflictError(f"document {record.id} already ingested")

        sentences = segment_document(record)
        statements = [classify(s, self.lexicon) for s in sentences]
        entities: list[tuple[str, str]] = []
        seen = set()
        for sentence in sentences:
            for mention in extract_entities(sentence, self.entity_rules):
                key = (mention.kind, mention.name)
                if key not in seen:
                    seen.add(key)
                    entities.append(key)

        stored = StoredDocument(
            record=record,
            sentences=tuple(sentences),
            statements=tuple(statements),
            entities=tuple(entities),
        )
        ops = self._graph_ops(record, statements, entities)

        with self._commit_lock:
            self.documents.put(stored)  # raises ConflictError on duplicate ids
            try:
                for sentence in sentences:
                    self.index.index_sentence(sentence, record.project_id)
                self.graph.apply(ops)
            except BaseException as exc:
                self.index.remove_document(record.id)
                self.documents.delete(record.id)
                if isinstance(exc, GeolinkError):
                    raise
                raise StorageError(f"ingest of {record.id} failed: {exc}") from exc

        counts = {category: 0 for category in model.CATEGORIES}
        for statement in statements:
            counts[statement.category] += 1
        return IngestReport(
            document_id=record.id,
            sentences=len(sentences),
            statements=counts,
            entities=len(entities),
        )

    def _graph_ops(self, record: DocumentRecord, statements, entities) -> list[dict]:
        ops: list[dict] = [
            {"op": "ensure_node", "label": "Project", "match": {"name": record.project_id}, "ref": "project"},
            {
                "op": "add_node",
                "label": "Document",
                "props": {"name": record.id, "title": record.title},
                "ref": "doc",
            },
            {"op": "add_edge", "source": "@doc", "target": "@project", "label": "PART_OF", "props": {}},
        ]
        for category, topic in TOPIC_BY_CATEGORY.items():
            if any(s.category == category for s in statements):
                ops.append(
                    {
                        "op": "ensure_node",
                        "label": "Topic",
                        "match": {"name": topic},
                        "ref": f"topic_{topic}",
                    }
                )
        for statement in statements:
            topic = TOPIC_BY_CATEGORY.get(statement.category)
            if topic is None:
                continue
            ops.append(
                {
                    "op": "add_edge",
                    "source": f"@topic_{topic}",
                    "target": "@doc",
                    "label": "STATED_IN",
                    "props": _statement_props(statement),
                }
            )
        for i, (kind, name) in enumerate(entities):
            ref = f"entity_{i}"
            ops.append({"op": "ensure_node", "label": kind, "match": {"name": name}, "ref": ref})
            ops.append(
                {
                    "op": "ensure_edge",
                    "source": f"@{ref}",
                    "target": "@project",
                    "label": "APPEARS_IN",
                    "props": {},
                }
            )
        return ops


def _statement_props(statement: Statement) -> dict:
    """STATED_IN edge payload; graph properties are scalars, so the month
    set is carried as a comma-joined string."""
    sentence = statement.sentence
    props = {
        "category": statement.category,
        "sentence": sentence.text,
        "page": sentence.page,
        "startOffset": sentence.start_offset,
        "endOffset": sentence.end_offset,
    }
    if statement.category == model.WEATHER:
        props.update(
            parameter=statement.parameter,
            comparator=statement.comparator,
            threshold=statement.threshold,
            unit=statement.unit,
        )
    if statement.category == model.TIME:
        props["months"] = ",".join(str(m) for m in sorted(statement.months))
    return props


def statement_from_edge_props(props: dict, document_id: str) -> Statement:
    """Rebuild a statement from a STATED_IN edge (inverse of the encoder)."""
    sentence = model.Sentence(
        document_id=document_id,
        page=props["page"],
        start_offset=props["startOffset"],
        end_offset=props["endOffset"],
        text=props["sentence"],
    )
    months: frozenset[int] = frozenset()
    if props.get("months"):
        months = frozenset(int(m) for m in str(props["months"]).split(","))
    return Statement(
        sentence=sentence,
        category=props["category"],
        parameter=props.get("parameter"),
        comparator=props.get("comparator"),
        threshold=props.get("threshold"),
        unit=props.get("unit"),
        months=months,
    )
