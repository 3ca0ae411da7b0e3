"""Sentence segmentation with exact character offsets.

A sentence ends at '.', '!' or '?' when followed by whitespace and an
uppercase letter, or at end of page. Dots inside known abbreviations
never split. The rule set is deliberately small and fixed: downstream
provenance needs determinism more than linguistic coverage.
"""

from __future__ import annotations

from geolink.textpipe.model import DocumentRecord, Sentence

DEFAULT_ABBREVIATIONS = ("z.B.", "Nr.", "ca.", "Abs.")

_TERMINATORS = ".!?"


def _protected_positions(text: str, abbreviations) -> set[int]:
    """Character positions covered by an abbreviation occurrence.

    Occurrences must start at a word boundary so e.g. 'circa.' is not
    shielded by 'ca.'.
    """
    protected: set[int] = set()
    for abbr in abbreviations:
        start = 0
        while True:
            pos = text.find(abbr, start)
            if pos < 0:
                break
            if pos == 0 or not text[pos - 1].isalnum():
                protected.update(range(pos, pos + len(abbr)))
            start = pos + 1
    return protected


def segment_page(text: str, abbreviations=DEFAULT_ABBREVIATIONS) -> list[tuple[int, int]]:
    """(start, end) spans of the sentences on one page."""
    protected = _protected_positions(text, abbreviations)
    spans: list[tuple[int, int]] = []
    n = len(text)
    start = 0
    while start < n and text[start].isspace():
        start += 1
    i = start
    while i < n:
        ch = text[i]
        if ch in _TERMINATORS and i not in protected and _is_terminator(text, i):
            spans.append((start, i + 1))
            start = i + 1
            while start < n and text[start].isspace():
                start += 1
            i = start
            continue
        i += 1
    if start < n:
        end = n
        while end > start and text[end - 1].isspace():
            end -= 1
        if end > start:
            spans.append((start, end))
    return spans


def _is_terminator(text: str, i: int) -> bool:
    j = i + 1
    n = len(text)
    if j >= n:
        return True  # end of page
    if not text[j].isspace():
        return False
    while j < n and text[j].isspace():
        j += 1
    if j >= n:
        return True  # only whitespace remains
    return text[j].isupper()


def segment_document(doc: DocumentRecord, abbreviations=DEFAULT_ABBREVIATIONS) -> list[Sentence]:
    sentences = []
    for page_no, page in enumerate(doc.pages, start=1):
        for start, end in segment_page(page, abbreviations):
            sentences.append(
                Sentence(
                    document_id=doc.id,
                    page=page_no,
                    start_offset=start,
                    end_offset=end,
                    text=page[start:end],
                )
            )
    return sentences
