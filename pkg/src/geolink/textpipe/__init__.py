"""Document processing: segmentation, classification, entities, ingest."""

from geolink.textpipe.classify import DEFAULT_LEXICON, Lexicon, classify
from geolink.textpipe.entities import EntityRules, Gazetteer, extract_entities
from geolink.textpipe.model import (
    CATEGORIES,
    DocumentRecord,
    EntityMention,
    Sentence,
    Statement,
)
from geolink.textpipe.pipeline import DocumentPipeline, IngestReport
from geolink.textpipe.segment import segment_document, segment_page
from geolink.textpipe.store import DocumentStore, StoredDocument

__all__ = [
    "DocumentRecord",
    "Sentence",
    "Statement",
    "EntityMention",
    "CATEGORIES",
    "Lexicon",
    "DEFAULT_LEXICON",
    "classify",
    "Gazetteer",
    "EntityRules",
    "extract_entities",
    "segment_page",
    "segment_document",
    "DocumentStore",
    "StoredDocument",
    "DocumentPipeline",
    "IngestReport",
]
