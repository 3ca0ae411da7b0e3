"""Domain types for the document processing pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

from geolink.errors import ValidationError

WEATHER = "weather_restriction"
TIME = "time_restriction"
OBLIGATION = "obligation"
PROHIBITION = "prohibition"
OTHER = "other"

CATEGORIES = (WEATHER, TIME, OBLIGATION, PROHIBITION, OTHER)

PARAMETERS = ("wind_speed", "precipitation", "temperature", "water_level")


@dataclass(frozen=True)
class DocumentRecord:
    """A document as handed to ingest: pre-extracted text, one entry per page."""

    id: str
    project_id: str
    title: str
    pages: tuple[str, ...]
    source_uri: str = ""
    confidential: bool = False

    def __post_init__(self):
        if not self.id:
            raise ValidationError("document id is required")
        if not self.project_id:
            raise ValidationError("document project id is required")
        if not self.pages:
            raise ValidationError("document needs at least one page")
        object.__setattr__(self, "pages", tuple(self.pages))

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "project": self.project_id,
            "title": self.title,
            "pages": list(self.pages),
            "source": self.source_uri,
            "confidential": self.confidential,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DocumentRecord":
        return cls(
            id=doc["id"],
            project_id=doc["project"],
            title=doc.get("title", ""),
            pages=tuple(doc["pages"]),
            source_uri=doc.get("source", ""),
            confidential=bool(doc.get("confidential", False)),
        )


@dataclass(frozen=True)
class Sentence:
    """A sentence with exact character provenance within its page."""

    document_id: str
    page: int  # 1-based
    start_offset: int
    end_offset: int
    text: str

    def __post_init__(self):
        if self.page < 1:
            raise ValidationError("page numbers are 1-based")
        if not (0 <= self.start_offset < self.end_offset):
            raise ValidationError("sentence offsets must satisfy 0 <= start < end")
        if len(self.text) != self.end_offset - self.start_offset:
            raise ValidationError("sentence text length does not match its offsets")

    def to_dict(self) -> dict:
        return {
            "documentId": self.document_id,
            "page": self.page,
            "startOffset": self.start_offset,
            "endOffset": self.end_offset,
            "text": self.text,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Sentence":
        return cls(
            document_id=doc["documentId"],
            page=doc["page"],
            start_offset=doc["startOffset"],
            end_offset=doc["endOffset"],
            text=doc["text"],
        )


@dataclass(frozen=True)
class Statement:
    """A classified sentence with extracted restriction semantics."""

    sentence: Sentence
    category: str
    parameter: str | None = None
    comparator: str | None = None  # GT | LT
    threshold: float | None = None
    unit: str | None = None
    months: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ValidationError(f"unknown statement category {self.category!r}")
        if self.category == WEATHER:
            if not (self.parameter and self.comparator and self.unit) or self.threshold is None:
                raise ValidationError("weather restrictions need parameter/comparator/threshold/unit")
        if self.category == TIME and not self.months:
            raise ValidationError("time restrictions need a non-empty month set")
        object.__setattr__(self, "months", frozenset(self.months))

    def to_dict(self) -> dict:
        doc = {"sentence": self.sentence.to_dict(), "category": self.category}
        if self.category == WEATHER:
            doc.update(
                parameter=self.parameter,
                comparator=self.comparator,
                threshold=self.threshold,
                unit=self.unit,
            )
        if self.category == TIME:
            doc["months"] = sorted(self.months)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "Statement":
        return cls(
            sentence=Sentence.from_dict(doc["sentence"]),
            category=doc["category"],
            parameter=doc.get("parameter"),
            comparator=doc.get("comparator"),
            threshold=doc.get("threshold"),
            unit=doc.get("unit"),
            months=frozenset(doc.get("months", ())),
        )


@dataclass(frozen=True)
class EntityMention:
    """A person or company name found verbatim in a sentence."""

    kind: str  # Person | Company
    name: str
    sentence: Sentence

    def __post_init__(self):
        if self.kind not in ("Person", "Company"):
            raise ValidationError(f"unknown entity kind {self.kind!r}")
        if not self.name:
            raise ValidationError("entity name must be non-empty")
        if self.name not in self.sentence.text:
            raise ValidationError("entity name must appear verbatim in its sentence")
