"""Document store: originals plus their extracted sentences and statements.

The original text is always retained so extraction results can be traced
back to the exact page and character range they came from. One JSON file
per document when a directory is configured.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from geolink.errors import ConflictError, NotFoundError, StorageError
from geolink.locks import RWLock
from geolink.textpipe.model import DocumentRecord, Sentence, Statement


@dataclass(frozen=True)
class StoredDocument:
    record: DocumentRecord
    sentences: tuple[Sentence, ...]
    statements: tuple[Statement, ...]
    entities: tuple[tuple[str, str], ...]  # (kind, name)

    def to_dict(self) -> dict:
        return {
            "record": self.record.to_dict(),
            "sentences": [s.to_dict() for s in self.sentences],
            "statements": [s.to_dict() for s in self.statements],
            "entities": [list(e) for e in self.entities],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "StoredDocument":
        return cls(
            record=DocumentRecord.from_dict(doc["record"]),
            sentences=tuple(Sentence.from_dict(s) for s in doc["sentences"]),
            statements=tuple(Statement.from_dict(s) for s in doc["statements"]),
            entities=tuple((k, n) for k, n in doc["entities"]),
        )


class DocumentStore:
    def __init__(self, directory: str | Path | None = None):
        self._docs: dict[str, StoredDocument] = {}
        self._lock = RWLock()
        self._dir = Path(directory) if directory else None
        if self._dir is not None:
            self._dir.mkdir(parents=True, exist_ok=True)
            for path in sorted(self._dir.glob("*.json")):
                try:
                    doc = StoredDocument.from_dict(json.loads(path.read_text(encoding="utf-8")))
                except (json.JSONDecodeError, KeyError) as exc:
                    raise StorageError(f"corrupt document file {path}: {exc}") from exc
                self._docs[doc.record.id] = doc

    def exists(self, document_id: str) -> bool:
        with self._lock.read():
            return document_id in self._docs

    def put(self, doc: StoredDocument) -> None:
        with self._lock.write():
            if doc.record.id in self._docs:
                raise ConflictError(f"document {doc.record.id} already ingested")
            self._docs[doc.record.id] = doc
            if self._dir is not None:
                path = self._dir / f"{_safe_name(doc.record.id)}.json"
                path.write_text(
                    json.dumps(doc.to_dict(), ensure_ascii=False, sort_keys=True),
                    encoding="utf-8",
                )

    def delete(self, document_id: str) -> None:
        """Rollback helper; stored documents are otherwise immutable."""
        with self._lock.write():
            if document_id not in self._docs:
                raise NotFoundError(f"document {document_id} does not exist")
            del self._docs[document_id]
            if self._dir is not None:
                path = self._dir / f"{_safe_name(document_id)}.json"
                if path.exists():
                    path.unlink()

    def get(self, document_id: str) -> StoredDocument:
        with self._lock.read():
            doc = self._docs.get(document_id)
            if doc is None:
                raise NotFoundError(f"document {document_id} does not exist")
            return doc

    def ids(self) -> list[str]:
        with self._lock.read():
            return sorted(self._docs)

    def by_project(self, project_id: str) -> list[StoredDocument]:
        with self._lock.read():
            return [
                self._docs[i] for i in sorted(self._docs)
                if self._docs[i].record.project_id == project_id
            ]

    def all(self) -> list[StoredDocument]:
        with self._lock.read():
            return [self._docs[i] for i in sorted(self._docs)]

    def snapshot(self) -> str:
        with self._lock.read():
            doc = {i: self._docs[i].to_dict() for i in sorted(self._docs)}
            return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _safe_name(document_id: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in document_id)
