"""Index builder: emitted bundles in, committed snapshot out."""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

from ..document import DOCBOOK_NS, SEGMENT_JOIN
from ..errors import ArchiveLensError
from .snapshot import IndexSnapshot, Posting, StoredDocument, StoredSegment

# Positions advance by one per token; segment ends add this on top, so a
# phrase can never straddle a title/paragraph boundary.
POSITION_GAP = 2

_XML_ID = "{http://www.w3.org/XML/1998/namespace}id"


class DuplicateDocId(ArchiveLensError):
    pass


class CorruptBundle(ArchiveLensError):
    """A bundle file is missing, unparseable or internally inconsistent."""


@dataclass(frozen=True)
class BundleRef:
    doc_id: str
    docbook_path: Path
    ann_path: Path
    off_path: Path


@dataclass(frozen=True)
class TermOccurrence:
    term: str
    start: int  # char offsets of the token core, edge punctuation excluded
    end: int
    position: int


def norm_term(raw: str) -> str:
    """Index-side token form: edge punctuation stripped, casefolded,
    diacritics kept, no stemming. Empty when nothing alphanumeric remains.
    """
    start, end = _core_bounds(raw)
    return raw[start:end].casefold()


def _core_bounds(raw: str) -> tuple[int, int]:
    start, end = 0, len(raw)
    while start < end and not raw[start].isalnum():
        start += 1
    while end > start and not raw[end - 1].isalnum():
        end -= 1
    return start, end


def iter_terms(text: str, segments: Sequence[StoredSegment]) -> Iterator[TermOccurrence]:
    """Indexable terms of a stored document in position order.

    The builder, the phrase matcher and the concordance all tokenize
    through here, so postings and text scans can never disagree.
    """
    position = 0
    for seg in segments:
        cursor = seg.start
        while cursor < seg.end:
            if text[cursor].isspace():
                cursor += 1
                continue
            tok_end = cursor
            while tok_end < seg.end and not text[tok_end].isspace():
                tok_end += 1
            lead, trail = _core_bounds(text[cursor:tok_end])
            if lead < trail:
                yield TermOccurrence(
                    term=text[cursor + lead:cursor + trail].casefold(),
                    start=cursor + lead,
                    end=cursor + trail,
                    position=position,
                )
                position += 1
            cursor = tok_end
        position += POSITION_GAP


def _segment_spans(root: ET.Element) -> list[StoredSegment]:
    q_section = f"{{{DOCBOOK_NS}}}section"
    q_title = f"{{{DOCBOOK_NS}}}title"
    q_para = f"{{{DOCBOOK_NS}}}para"
    segments: list[StoredSegment] = []
    cursor = 0
    for sec in root.findall(q_section):
        section_id = sec.get(_XML_ID, "")
        for el in sec:
            if el.tag == q_title:
                kind = "title"
            elif el.tag == q_para:
                kind = "para"
            else:
                continue
            piece = el.text or ""
            if segments:
                cursor += len(SEGMENT_JOIN)
            segments.append(StoredSegment(kind, section_id, cursor, cursor + len(piece)))
            cursor += len(piece)
    return segments


def _load_bundle(ref: BundleRef) -> StoredDocument:
    try:
        root = ET.fromstring(Path(ref.docbook_path).read_bytes())
    except (OSError, ET.ParseError) as exc:
        raise CorruptBundle(f"{ref.doc_id}: unreadable DocBook: {exc}") from exc
    if root.get(_XML_ID) != ref.doc_id:
        raise CorruptBundle(f"{ref.doc_id}: DocBook carries id {root.get(_XML_ID)!r}")

    info = root.find(f"{{{DOCBOOK_NS}}}info")
    title = info.findtext(f"{{{DOCBOOK_NS}}}title", "") if info is not None else ""
    date = info.findtext(f"{{{DOCBOOK_NS}}}date", "") if info is not None else ""

    segments = _segment_spans(root)
    parts = []
    for sec in root.findall(f"{{{DOCBOOK_NS}}}section"):
        for el in sec:
            if el.tag in (f"{{{DOCBOOK_NS}}}title", f"{{{DOCBOOK_NS}}}para"):
                parts.append(el.text or "")
    text = SEGMENT_JOIN.join(parts)

    try:
        ann_data = json.loads(Path(ref.ann_path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise CorruptBundle(f"{ref.doc_id}: unreadable annotations: {exc}") from exc
    if ann_data.get("doc_id") != ref.doc_id:
        raise CorruptBundle(f"{ref.doc_id}: annotation sidecar names {ann_data.get('doc_id')!r}")

    persons: set[str] = set()
    places: set[str] = set()
    years: set[str] = set()
    mentions: Counter[tuple[str, str]] = Counter()
    for ann in ann_data.get("annotations", []):
        kind = ann.get("kind", "")
        span = ann.get("span", [0, 0])
        surface = ann.get("surface", "")
        if text[span[0]:span[1]] != surface:
            raise CorruptBundle(f"{ref.doc_id}: annotation span {span} does not match its surface")
        canonical = ann.get("normalized") or surface
        if kind == "person":
            persons.add(canonical)
        elif kind == "place":
            places.add(canonical)
        elif kind == "temporal":
            year = canonical[:4]
            if year.isdigit():
                years.add(year)
        mentions[(kind, canonical)] += 1

    token_length = sum(1 for _ in iter_terms(text, segments))
    return StoredDocument(
        doc_id=ref.doc_id,
        title=title,
        date=date,
        text=text,
        segments=tuple(segments),
        token_length=token_length,
        persons=tuple(sorted(persons)),
        places=tuple(sorted(places)),
        temporal_years=tuple(sorted(years)),
        mentions=tuple(sorted((k, n, c) for (k, n), c in mentions.items())),
        docbook_path=str(Path(ref.docbook_path).resolve()),
        ann_path=str(Path(ref.ann_path).resolve()),
        off_path=str(Path(ref.off_path).resolve()),
    )


def build_index(bundles: Sequence[BundleRef], out_dir: Path | str) -> IndexSnapshot:
    """Build and commit a snapshot from emitted bundles.

    Deterministic for identical inputs: terms are written sorted and all
    per-document facet lists are sorted at load time.
    """
    seen: set[str] = set()
    documents: list[StoredDocument] = []
    postings_acc: dict[str, dict[int, list[int]]] = {}
    for ref in bundles:
        if ref.doc_id in seen:
            raise DuplicateDocId(ref.doc_id)
        seen.add(ref.doc_id)
        doc = _load_bundle(ref)
        ord_ = len(documents)
        documents.append(doc)
        for occ in iter_terms(doc.text, doc.segments):
            postings_acc.setdefault(occ.term, {}).setdefault(ord_, []).append(occ.position)

    postings = {
        term: tuple(
            Posting(doc_ord=o, tf=len(pos), positions=tuple(pos))
            for o, pos in sorted(by_doc.items())
        )
        for term, by_doc in postings_acc.items()
    }
    return IndexSnapshot.write(out_dir, documents, postings)
