"""Sentence-granular inverted index with tf-idf ranked conjunctive search.

Sentences (not whole documents) are the unit of retrieval so every hit
carries exact provenance. The index is rebuildable from the document
store and keeps no persistence of its own.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass

from geolink.errors import ValidationError
from geolink.locks import RWLock
from geolink.textpipe.model import Sentence

# Lowercased alphanumeric runs; underscores split tokens.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    return [t.lower() for t in _TOKEN_RE.findall(text)]


@dataclass(frozen=True)
class SearchHit:
    document_id: str
    project_id: str
    sentence: Sentence
    score: float


class SentenceIndex:
    def __init__(self) -> None:
        # term -> {sentence key -> term frequency}
        self._postings: dict[str, dict[tuple, int]] = {}
        # sentence key -> (project id, sentence)
        self._sentences: dict[tuple, tuple[str, Sentence]] = {}
        self._lock = RWLock()

    @staticmethod
    def _key(sentence: Sentence) -> tuple:
        return (sentence.document_id, sentence.page, sentence.start_offset)

    def index_sentence(self, sentence: Sentence, project_id: str) -> None:
        if not sentence.text:
            raise ValidationError("cannot index an empty sentence")
        key = self._key(sentence)
        with self._lock.write():
            if key in self._sentences:
                self._remove_key(key)
            self._sentences[key] = (project_id, sentence)
            for token in tokenize(sentence.text):
                bucket = self._postings.setdefault(token, {})
                bucket[key] = bucket.get(key, 0) + 1

    def search(
        self,
        query: str,
        project_filter: set[str] | None = None,
        limit: int = 10,
    ) -> list[SearchHit]:
        """All-tokens-must-match search, scored by sum of tf * ln(1 + N/df)."""
        if limit < 1:
            raise ValidationError("limit must be at least 1")
        tokens = sorted(set(tokenize(query)))
        if not tokens:
            raise ValidationError("query has no searchable tokens")
        with self._lock.read():
            candidate_keys: set[tuple] | None = None
            for token in tokens:
                bucket = self._postings.get(token)
                if not bucket:
                    return []
                keys = set(bucket)
                candidate_keys = keys if candidate_keys is None else candidate_keys & keys
                if not candidate_keys:
                    return []
            n_sentences = len(self._sentences)
            idf = {
                token: math.log(1.0 + n_sentences / len(self._postings[token]))
                for token in tokens
            }
            hits = []
            for key in candidate_keys:
                project_id, sentence = self._sentences[key]
                if project_filter is not None and project_id not in project_filter:
                    continue
                score = sum(self._postings[token][key] * idf[token] for token in tokens)
                hits.append(SearchHit(sentence.document_id, project_id, sentence, score))
            hits.sort(
                key=lambda h: (-h.score, h.document_id, h.sentence.page, h.sentence.start_offset)
            )
            return hits[:limit]

    def remove_document(self, document_id: str) -> int:
        """Drop every sentence of a document (ingest rollback support)."""
        with self._lock.write():
            keys = [k for k in self._sentences if k[0] == document_id]
            for key in keys:
                self._remove_key(key)
            return len(keys)

    def stats(self) -> dict:
        with self._lock.read():
            return {"sentenceCount": len(self._sentences), "termCount": len(self._postings)}

    def snapshot(self) -> str:
        """Canonical JSON of postings and sentences, for state diffing."""
        with self._lock.read():
            doc = {
                "sentences": [
                    {
                        "key": list(key),
                        "project": project_id,
                        "text": sentence.text,
                        "endOffset": sentence.end_offset,
                    }
                    for key, (project_id, sentence) in sorted(self._sentences.items())
                ],
                "postings": {
                    term: [[list(k), tf] for k, tf in sorted(bucket.items())]
                    for term, bucket in sorted(self._postings.items())
                },
            }
            return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    def _remove_key(self, key: tuple) -> None:
        del self._sentences[key]
        dead_terms = []
        for term, bucket in self._postings.items():
            bucket.pop(key, None)
            if not bucket:
                dead_terms.append(term)
        for term in dead_terms:
            del self._postings[term]
