"""Entity extraction: gazetteer lookups plus a company-suffix rule.

Gazetteer names are matched verbatim at word boundaries. Additionally,
runs of capitalized tokens ending in a legal-form suffix ("GmbH", "AG",
"mbH") are emitted as companies; generic lead-ins such as "Firma" ("the
company ...") are not part of the name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from geolink.textpipe.model import EntityMention, Sentence

DEFAULT_COMPANY_SUFFIXES = ("GmbH", "AG", "mbH", "KG", "e.V.")
DEFAULT_COMPANY_LEADINS = ("Firma", "Fa.", "Die", "Der", "Das", "The")

_TOKEN_RE = re.compile(r"[\w\-'./]+", re.UNICODE)


@dataclass(frozen=True)
class Gazetteer:
    persons: tuple[str, ...] = ()
    companies: tuple[str, ...] = ()


@dataclass(frozen=True)
class EntityRules:
    gazetteer: Gazetteer = field(default_factory=Gazetteer)
    company_suffixes: tuple[str, ...] = DEFAULT_COMPANY_SUFFIXES
    company_leadins: tuple[str, ...] = DEFAULT_COMPANY_LEADINS


def _match_suffix(token: str, suffixes) -> str | None:
    """The legal-form suffix this token spells, tolerating trailing
    punctuation ('GmbH.' at sentence end still counts as 'GmbH')."""
    for suffix in suffixes:
        if token == suffix:
            return suffix
        if token.startswith(suffix) and not set(token[len(suffix):]) - set(".,;:!?"):
            return suffix
    return None


def _word_bounded_occurrences(text: str, name: str) -> list[int]:
    positions = []
    start = 0
    while True:
        pos = text.find(name, start)
        if pos < 0:
            return positions
        end = pos + len(name)
        before_ok = pos == 0 or not text[pos - 1].isalnum()
        after_ok = end >= len(text) or not text[end].isalnum()
        if before_ok and after_ok:
            positions.append(pos)
        start = pos + 1


def extract_entities(sentence: Sentence, rules: EntityRules) -> list[EntityMention]:
    """Mentions in first-occurrence order, de-duplicated by (kind, name)."""
    text = sentence.text
    found: list[tuple[int, str, str]] = []  # (position, kind, name)

    for name in rules.gazetteer.persons:
        for pos in _word_bounded_occurrences(text, name):
            found.append((pos, "Person", name))
    for name in rules.gazetteer.companies:
        for pos in _word_bounded_occurrences(text, name):
            found.append((pos, "Company", name))

    tokens = [(m.start(), m.end(), m.group(0)) for m in _TOKEN_RE.finditer(text)]
    for i, (t_start, t_end, token) in enumerate(tokens):
        suffix = _match_suffix(token, rules.company_suffixes)
        if suffix is None:
            continue
        t_end = t_start + len(suffix)  # drop trailing sentence punctuation
        j = i
        while j > 0:
            p_start, p_end, prev = tokens[j - 1]
            if not prev[0].isupper() or prev in rules.company_leadins:
                break
            if text[p_end : tokens[j][0]].strip():
                break  # punctuation between tokens ends the name run
            j -= 1
        if j == i:
            continue  # bare suffix, no name in front of it
        found.append((tokens[j][0], "Company", text[tokens[j][0] : t_end]))

    found.sort()
    seen = set()
    mentions = []
    for pos, kind, name in found:
        if (kind, name) in seen:
            continue
        seen.add((kind, name))
        mentions.append(EntityMention(kind=kind, name=name, sentence=sentence))
    return mentions
