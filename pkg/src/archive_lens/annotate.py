"""Stand-off semantic annotation.

Rule-based temporal expressions (explicit dates and years, plus a closed
set of relative day words anchored on the publication date) and
gazetteer-driven person/place recognition with an honorific trigger
rule. All spans are produced per sentence and rebased to document
character space by merge_annotations.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from datetime import date, timedelta
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

from .errors import ArchiveLensError
from .layout import Sentence
from .normalize import NormalizedToken, TokenRef


class Kind(str, Enum):
    PERSON = "person"
    PLACE = "place"
    TEMPORAL = "temporal"


class SpanOutOfRange(ArchiveLensError):
    """An annotation span does not match the document text; the document
    is internally inconsistent and must be aborted."""


class GazetteerError(ArchiveLensError):
    """Gazetteer file violates its invariants (e.g. ambiguous variant)."""


@dataclass(frozen=True)
class Annotation:
    annotation_id: str
    doc_id: str
    span: tuple[int, int]
    kind: Kind
    surface: str
    normalized: Optional[str]
    rule_id: str
    anchors: tuple[TokenRef, ...] = ()


MONTHS = {
    "janvier": 1, "février": 2, "fevrier": 2, "mars": 3, "avril": 4,
    "mai": 5, "juin": 6, "juillet": 7, "août": 8, "aout": 8,
    "septembre": 9, "octobre": 10, "novembre": 11, "décembre": 12, "decembre": 12,
}
WEEKDAYS = ("lundi", "mardi", "mercredi", "jeudi", "vendredi", "samedi", "dimanche")
RELATIVE_OFFSETS = {
    "avant-hier": -2,
    "hier": -1,
    "aujourd'hui": 0,
    "aujourd’hui": 0,
    "demain": 1,
    "après-demain": 2,
    "apres-demain": 2,
}

_MONTH_ALT = "|".join(sorted(MONTHS, key=len, reverse=True))
_WEEKDAY_ALT = "|".join(WEEKDAYS)
_YEAR = r"(1\d{3}|20\d{2})"

_FULL_DATE = re.compile(
    rf"(?:\b(?:{_WEEKDAY_ALT})\s+)?(?:\ble\s+)?\b(\d{{1,2}}|1er)\s+({_MONTH_ALT})\s+{_YEAR}\b",
    re.IGNORECASE,
)
_MONTH_YEAR = re.compile(rf"\b({_MONTH_ALT})\s+{_YEAR}\b", re.IGNORECASE)
_BARE_YEAR = re.compile(rf"(?<![\d\w]){_YEAR}(?![\d\w])")
_RELATIVE = re.compile(
    r"(?<![\w-])(" + "|".join(sorted(RELATIVE_OFFSETS, key=len, reverse=True)) + r")(?![\w-])",
    re.IGNORECASE,
)


def _iso_day(year: int, month: int, day: int) -> str:
    try:
        return date(year, month, day).isoformat()
    except ValueError:
        return f"{year:04d}-{month:02d}"  # calendar-invalid day: month precision


def detect_temporal(sentence: Sentence | str, pub_date: Optional[date]) -> list[Annotation]:
    """Temporal expressions of one sentence, spans sentence-local.

    Longest matches win: full French dates, then month-year, bare years
    1000-2099, and the relative day words. Explicit values normalize to
    ISO-8601 at their own precision; relative ones anchor on pub_date
    when given and stay unnormalized otherwise.
    """
    text = sentence.text if isinstance(sentence, Sentence) else sentence
    candidates: list[tuple[tuple[int, int], Optional[str], str]] = []

    for m in _FULL_DATE.finditer(text):
        day = 1 if m.group(1).lower() == "1er" else int(m.group(1))
        if not 1 <= day <= 31:
            continue
        month = MONTHS[m.group(2).lower()]
        candidates.append((m.span(), _iso_day(int(m.group(3)), month, day), "temporal:full"))
    for m in _MONTH_YEAR.finditer(text):
        month = MONTHS[m.group(1).lower()]
        candidates.append((m.span(), f"{int(m.group(2)):04d}-{month:02d}", "temporal:month"))
    for m in _BARE_YEAR.finditer(text):
        candidates.append((m.span(), m.group(1), "temporal:year"))
    for m in _RELATIVE.finditer(text):
        offset = RELATIVE_OFFSETS[m.group(1).lower()]
        normalized = (pub_date + timedelta(days=offset)).isoformat() if pub_date else None
        candidates.append((m.span(), normalized, "temporal:relative"))

    chosen = _resolve_overlaps(candidates)
    return [
        Annotation("", "", span, Kind.TEMPORAL, text[span[0]:span[1]], normalized, rule)
        for span, normalized, rule in chosen
    ]


def _resolve_overlaps(candidates: list) -> list:
    """Greedy longest-span-first, ties leftmost then listing order."""
    taken: list[tuple[int, int]] = []
    chosen = []
    order = sorted(
        range(len(candidates)),
        key=lambda i: (-(candidates[i][0][1] - candidates[i][0][0]), candidates[i][0][0], i),
    )
    for i in order:
        s, e = candidates[i][0]
        if any(s < te and ts < e for ts, te in taken):
            continue
        taken.append((s, e))
        chosen.append(candidates[i])
    chosen.sort(key=lambda c: c[0])
    return chosen


DEFAULT_TRIGGER_PREFIXES = ("M.", "MM.", "Mme", "Mlle")


class Gazetteer:
    """Entity list: canonical name to surface variants, one kind per file."""

    def __init__(
        self,
        kind: Kind,
        entries: dict[str, Sequence[str]],
        trigger_prefixes: Sequence[str] = (),
    ):
        self.kind = kind
        self.trigger_prefixes = tuple(trigger_prefixes)
        self._canonical: dict[str, str] = {}
        for canonical, variants in entries.items():
            for variant in {canonical, *variants}:
                folded = variant.casefold()
                if self._canonical.get(folded, canonical) != canonical:
                    raise GazetteerError(
                        f"variant {variant!r} maps to both {self._canonical[folded]!r} and {canonical!r}"
                    )
                self._canonical[folded] = canonical
        ordered = sorted(self._canonical, key=lambda v: (-len(v), v))
        self._pattern = re.compile(
            r"(?<!\w)(" + "|".join(re.escape(v) for v in ordered) + r")(?!\w)",
            re.IGNORECASE,
        ) if ordered else None

    @classmethod
    def from_json(cls, path: Path | str) -> "Gazetteer":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            kind=Kind(data["kind"]),
            entries=data["entries"],
            trigger_prefixes=data.get("trigger_prefixes", DEFAULT_TRIGGER_PREFIXES),
        )

    def canonical_of(self, surface: str) -> Optional[str]:
        return self._canonical.get(surface.casefold())

    def matches(self, text: str) -> list[tuple[tuple[int, int], str]]:
        if self._pattern is None:
            return []
        return [(m.span(), self._canonical[m.group(1).casefold()]) for m in self._pattern.finditer(text)]


_WORD = re.compile(r"\S+")


def _trigger_matches(text: str, prefixes: Sequence[str]) -> list[tuple[int, int]]:
    """Spans of capitalized token runs right after an honorific."""
    tokens = [(m.start(), m.end(), m.group(0)) for m in _WORD.finditer(text)]
    spans = []
    i = 0
    while i < len(tokens):
        if tokens[i][2] in prefixes:
            j = i + 1
            while j < len(tokens) and tokens[j][2][0].isupper() and tokens[j][2][0].isalpha():
                j += 1
            if j > i + 1:
                start = tokens[i + 1][0]
                end = tokens[j - 1][1]
                while end > start and not text[end - 1].isalnum():
                    end -= 1  # drop sentence punctuation glued to the name
                spans.append((start, end))
                i = j
                continue
        i += 1
    return spans


def tag_entities(sentence: Sentence | str, gazetteers: Sequence[Gazetteer]) -> list[Annotation]:
    """Person/place annotations for one sentence, spans sentence-local.

    Greedy longest match over gazetteer variants (case-insensitive,
    diacritics significant) plus the honorific trigger rule for persons;
    same-kind overlaps resolve longest-first, gazetteer before trigger.
    """
    text = sentence.text if isinstance(sentence, Sentence) else sentence
    by_kind: dict[Kind, list] = {}
    person_gaz: Optional[Gazetteer] = None
    for gaz in gazetteers:
        bucket = by_kind.setdefault(gaz.kind, [])
        for span, canonical in gaz.matches(text):
            bucket.append((span, canonical, f"gazetteer:{gaz.kind.value}"))
        if gaz.kind is Kind.PERSON and person_gaz is None:
            person_gaz = gaz

    # the honorific trigger runs with or without a person gazetteer; a
    # gazetteer can still override the prefix list and canonicalize hits
    prefixes = DEFAULT_TRIGGER_PREFIXES
    if person_gaz is not None and person_gaz.trigger_prefixes:
        prefixes = person_gaz.trigger_prefixes
    bucket = by_kind.setdefault(Kind.PERSON, [])
    for span in _trigger_matches(text, prefixes):
        surface = text[span[0]:span[1]]
        canonical = person_gaz.canonical_of(surface) if person_gaz else None
        bucket.append((span, canonical or surface, "trigger:honorific"))

    annotations = []
    for kind, candidates in by_kind.items():
        for span, canonical, rule in _resolve_overlaps(candidates):
            annotations.append(Annotation(
                "", "", span, kind, text[span[0]:span[1]], canonical, rule,
            ))
    annotations.sort(key=lambda a: (a.span, a.kind.value))
    return annotations


def merge_annotations(
    doc_id: str,
    doc_text: str,
    per_sentence: Sequence[tuple[int, Sequence[Annotation]]],
    tokens: Sequence[NormalizedToken],
) -> list[Annotation]:
    """Rebase sentence-local annotations into document character space.

    Assigns stable ids in (start, kind) order and anchors each annotation
    to the source tokens its span overlaps. Raises SpanOutOfRange when a
    rebased surface no longer matches the document text or when two
    annotations of one kind overlap.
    """
    rebased = []
    for offset, annotations in per_sentence:
        for ann in annotations:
            s, e = ann.span[0] + offset, ann.span[1] + offset
            if not (0 <= s < e <= len(doc_text)) or doc_text[s:e] != ann.surface:
                raise SpanOutOfRange(
                    f"{doc_id}: span [{s},{e}) does not carry surface {ann.surface!r}"
                )
            rebased.append(replace(ann, span=(s, e), doc_id=doc_id))
    rebased.sort(key=lambda a: (a.span, a.kind.value))

    last_end: dict[Kind, int] = {}
    for ann in rebased:
        if ann.span[0] < last_end.get(ann.kind, 0):
            raise SpanOutOfRange(f"{doc_id}: overlapping {ann.kind.value} annotations at {ann.span}")
        last_end[ann.kind] = ann.span[1]

    spanned = [t for t in tokens if t.char_span is not None]
    merged = []
    for n, ann in enumerate(rebased, 1):
        anchors = tuple(
            ref
            for tok in spanned
            if tok.char_span[0] < ann.span[1] and ann.span[0] < tok.char_span[1]
            for ref in tok.refs
        )
        merged.append(replace(ann, annotation_id=f"{doc_id}-a{n:04d}", anchors=anchors))
    return merged
