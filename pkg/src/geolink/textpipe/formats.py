"""On-disk formats: document files, gazetteer lists, lexicon config.

A document file is UTF-8 text: header lines (``id:``, ``project:``,
``title:``, ``source:``, ``confidential:``) up to the first blank line,
then the page block with pages separated by form-feed characters.
"""

from __future__ import annotations

from geolink.errors import ValidationError
from geolink.textpipe.classify import DEFAULT_LEXICON, Lexicon
from geolink.textpipe.model import DocumentRecord

PAGE_SEPARATOR = "\f"

_HEADER_KEYS = ("id", "project", "title", "source", "confidential")


def parse_document(text: str) -> DocumentRecord:
    lines = text.split("\n")
    headers: dict[str, str] = {}
    body_start = 0
    for i, line in enumerate(lines):
        if not line.strip():
            body_start = i + 1
            break
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in _HEADER_KEYS:
            raise ValidationError(f"bad document header line: {line!r}")
        headers[key] = value.strip()
    else:
        raise ValidationError("document file has no body (missing blank line after headers)")
    if "id" not in headers or "project" not in headers:
        raise ValidationError("document headers must include id: and project:")
    body = "\n".join(lines[body_start:])
    pages = body.split(PAGE_SEPARATOR)
    confidential = headers.get("confidential", "false").lower()
    if confidential not in ("true", "false", "yes", "no", "1", "0"):
        raise ValidationError(f"confidential must be true/false, got {confidential!r}")
    return DocumentRecord(
        id=headers["id"],
        project_id=headers["project"],
        title=headers.get("title", ""),
        pages=tuple(pages),
        source_uri=headers.get("source", ""),
        confidential=confidential in ("true", "yes", "1"),
    )


def render_document(record: DocumentRecord) -> str:
    head = [
        f"id: {record.id}",
        f"project: {record.project_id}",
        f"title: {record.title}",
        f"source: {record.source_uri}",
        f"confidential: {'true' if record.confidential else 'false'}",
    ]
    return "\n".join(head) + "\n\n" + PAGE_SEPARATOR.join(record.pages)


def parse_name_list(text: str) -> tuple[str, ...]:
    """Gazetteer file: one name per line, blanks and '#' comments skipped."""
    names = []
    for line in text.splitlines():
        entry = line.strip()
        if entry and not entry.startswith("#"):
            names.append(entry)
    return tuple(names)


_LEXICON_SECTIONS = ("parameter", "comparator_gt", "comparator_lt", "prohibition", "obligation")


def parse_lexicon(text: str) -> Lexicon:
    """Lexicon file: ``[section]`` headers with one entry per line;
    parameter entries are ``keyword|parameter_name``."""
    sections: dict[str, list[str]] = {name: [] for name in _LEXICON_SECTIONS}
    current: str | None = None
    for line in text.splitlines():
        entry = line.strip()
        if not entry or entry.startswith("#"):
            continue
        if entry.startswith("[") and entry.endswith("]"):
            current = entry[1:-1].strip().lower()
            if current not in sections:
                raise ValidationError(f"unknown lexicon section {current!r}")
            continue
        if current is None:
            raise ValidationError("lexicon entries must appear under a [section]")
        sections[current].append(entry)
    parameters = []
    for entry in sections["parameter"]:
        keyword, sep, parameter = entry.partition("|")
        if not sep or not keyword.strip() or not parameter.strip():
            raise ValidationError(f"parameter entries are keyword|name, got {entry!r}")
        parameters.append((keyword.strip().lower(), parameter.strip()))
    return Lexicon(
        parameters=tuple(parameters) or DEFAULT_LEXICON.parameters,
        gt_phrases=tuple(sections["comparator_gt"]) or DEFAULT_LEXICON.gt_phrases,
        lt_phrases=tuple(sections["comparator_lt"]) or DEFAULT_LEXICON.lt_phrases,
        prohibition_cues=tuple(sections["prohibition"]) or DEFAULT_LEXICON.prohibition_cues,
        obligation_cues=tuple(sections["obligation"]) or DEFAULT_LEXICON.obligation_cues,
    )
