"""Deterministic rule-cascade statement classifier.

The cascade, in priority order: weather restriction (parameter keyword +
comparator phrase + number-with-unit), time restriction (month range),
prohibition cue, obligation cue, otherwise "other". The lexicon is plain
data so a learned model can replace this behind the same interface.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from geolink.sensors.feed import GT, LT
from geolink.textpipe import model
from geolink.textpipe.model import Sentence, Statement

MONTHS = {
    "january": 1, "februar": 2, "february": 2, "march": 3, "april": 4,
    "may": 5, "june": 6, "july": 7, "august": 8, "september": 9,
    "october": 10, "november": 11, "december": 12,
    "januar": 1, "märz": 3, "mai": 5, "juni": 6, "juli": 7,
    "oktober": 10, "dezember": 12,
}

_MONTH_RANGE_RE = re.compile(
    r"(?<![^\W\d_])(" + "|".join(sorted(MONTHS, key=len, reverse=True)) + r")"
    r"\s+(?:to|until|till|through|bis)\s+"
    r"(" + "|".join(sorted(MONTHS, key=len, reverse=True)) + r")(?![^\W\d_])",
    re.IGNORECASE | re.UNICODE,
)

# Decimal comma or point; unit is the token that follows.
_NUMBER_RE = re.compile(r"\d+(?:[.,]\d+)?")


@dataclass(frozen=True)
class Lexicon:
    parameters: tuple[tuple[str, str], ...]
    gt_phrases: tuple[str, ...]
    lt_phrases: tuple[str, ...]
    prohibition_cues: tuple[str, ...]
    obligation_cues: tuple[str, ...]


DEFAULT_LEXICON = Lexicon(
    parameters=(
        ("wind speed", "wind_speed"),
        ("wind speeds", "wind_speed"),
        ("windgeschwindigkeit", "wind_speed"),
        ("windgeschwindigkeiten", "wind_speed"),
        ("precipitation", "precipitation"),
        ("rainfall", "precipitation"),
        ("niederschlag", "precipitation"),
        ("temperature", "temperature"),
        ("temperatures", "temperature"),
        ("temperatur", "temperature"),
        ("temperaturen", "temperature"),
        ("water level", "water_level"),
        ("water levels", "water_level"),
        ("wasserstand", "water_level"),
        ("pegel", "water_level"),
    ),
    gt_phrases=(
        "exceeds", "exceed", "above", "more than", "greater than",
        "überschreitet", "überschreiten", "über", "oberhalb", "mehr als",
    ),
    lt_phrases=(
        "falls below", "below", "less than",
        "unterschreitet", "unterschreiten", "unter", "unterhalb", "weniger als",
    ),
    prohibition_cues=(
        "must not", "may not", "shall not", "prohibited", "not permitted",
        "darf nicht", "dürfen nicht", "untersagt", "verboten", "unzulässig",
    ),
    obligation_cues=(
        "must", "shall", "is required", "required to",
        "durchzuführen", "müssen", "erforderlich",
        "zu gewährleisten", "hat zu erfolgen", "einzuhalten",
    ),
)


def _find_phrase(low: str, phrase: str) -> tuple[int, int] | None:
    """First word-bounded occurrence of ``phrase`` in casefolded text."""
    needle = phrase.lower()
    start = 0
    while True:
        pos = low.find(needle, start)
        if pos < 0:
            return None
        end = pos + len(needle)
        before_ok = pos == 0 or not low[pos - 1].isalnum()
        after_ok = end >= len(low) or not low[end].isalnum()
        if before_ok and after_ok:
            return pos, end
        start = pos + 1


def _earliest(low: str, phrases) -> tuple[int, int, str] | None:
    best = None
    for phrase in phrases:
        hit = _find_phrase(low, phrase)
        if hit and (best is None or hit[0] < best[0]):
            best = (hit[0], hit[1], phrase)
    return best


def _number_with_unit(text: str, search_from: int = 0) -> tuple[float, str] | None:
    """First number at or after ``search_from`` that has a following token."""
    for match in _NUMBER_RE.finditer(text, search_from):
        rest = text[match.end():]
        stripped = rest.lstrip()
        if not stripped:
            continue
        unit = stripped.split()[0].rstrip(".,;:!?")
        if unit:
            value = float(match.group(0).replace(",", "."))
            return value, unit
    return None


def _month_range(text: str) -> frozenset[int] | None:
    match = _MONTH_RANGE_RE.search(text)
    if not match:
        return None
    first = MONTHS[match.group(1).lower()]
    last = MONTHS[match.group(2).lower()]
    if first <= last:
        return frozenset(range(first, last + 1))
    # Wrap around the turn of the year, e.g. November to February.
    return frozenset(range(first, 13)) | frozenset(range(1, last + 1))


def classify(sentence: Sentence, lexicon: Lexicon = DEFAULT_LEXICON) -> Statement:
    """Total and deterministic: every sentence maps to exactly one category."""
    text = sentence.text
    low = text.lower()

    parameter_hit = None
    for keyword, parameter in lexicon.parameters:
        hit = _find_phrase(low, keyword)
        if hit and (parameter_hit is None or hit[0] < parameter_hit[0]):
            parameter_hit = (hit[0], hit[1], parameter)
    gt_hit = _earliest(low, lexicon.gt_phrases)
    lt_hit = _earliest(low, lexicon.lt_phrases)
    comparator_hit = None
    if gt_hit and (lt_hit is None or gt_hit[0] <= lt_hit[0]):
        comparator_hit = (*gt_hit[:2], GT)
    elif lt_hit:
        comparator_hit = (*lt_hit[:2], LT)

    if parameter_hit and comparator_hit:
        number = _number_with_unit(text, comparator_hit[1]) or _number_with_unit(text)
        if number:
            return Statement(
                sentence=sentence,
                category=model.WEATHER,
                parameter=parameter_hit[2],
                comparator=comparator_hit[2],
                threshold=number[0],
                unit=number[1],
            )

    months = _month_range(text)
    if months:
        return Statement(sentence=sentence, category=model.TIME, months=months)

    if _earliest(low, lexicon.prohibition_cues):
        return Statement(sentence=sentence, category=model.PROHIBITION)

    if _earliest(low, lexicon.obligation_cues):
        return Statement(sentence=sentence, category=model.OBLIGATION)

    return Statement(sentence=sentence, category=model.OTHER)
