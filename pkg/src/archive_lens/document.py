"""Document assembly and emission.

Turns parsed pages plus normalized tokens into one structured document:
labeled blocks, sections, a normalized text with character offsets,
sentences, stand-off annotations and a char-to-page-geometry offset map.
Emits the DocBook subset plus the two sidecar JSON files.
"""

from __future__ import annotations

import json
import os
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from datetime import date
from pathlib import Path
from typing import Optional, Sequence

from .alto import AltoPage, CollectionMeta
from .annotate import Annotation, Gazetteer, detect_temporal, merge_annotations, tag_entities
from .errors import ArchiveLensError
from .language import LanguageProfile, detect_language
from .layout import (
    HeaderMetadata,
    Label,
    LayoutConfig,
    LogicalBlock,
    Section,
    Sentence,
    classify_blocks,
    extract_header_metadata,
    segment_sections,
    split_sentences,
)
from .normalize import (
    Lexicon,
    NormalizedToken,
    NormalizeStats,
    iter_source_lines,
    normalize_lines,
)

TITLE_JOIN = " — "  # separator between title lines of one section
SEGMENT_JOIN = "\n"

DOCBOOK_NS = "http://docbook.org/ns/docbook"
XML_NS = "http://www.w3.org/XML/1998/namespace"
def _q(tag: str) -> str:
    return f"{{{DOCBOOK_NS}}}{tag}"


_XML_ID = f"{{{XML_NS}}}id"
ALLOWED_TAGS = {_q(t) for t in ("article", "info", "title", "date", "section", "para")}

ET.register_namespace("", DOCBOOK_NS)


class DocBookError(ArchiveLensError):
    """Emitted DocBook violates the allowed subset."""


@dataclass(frozen=True)
class Segment:
    """One line of the normalized text: a section title or a paragraph."""

    kind: str  # "title" or "para"
    section_id: str
    char_span: tuple[int, int]


@dataclass(frozen=True)
class BoxOnPage:
    page: int
    x: float
    y: float
    w: float
    h: float


@dataclass(frozen=True)
class OffsetEntry:
    char_span: tuple[int, int]
    boxes: tuple[BoxOnPage, ...]


@dataclass
class StructuredDocument:
    doc_id: str
    meta: CollectionMeta
    header: HeaderMetadata
    language: Optional[str]
    language_confidence: Optional[float]
    blocks: list[LogicalBlock]
    sections: list[Section]
    segments: list[Segment]
    normalized_text: str
    tokens: list[NormalizedToken]  # kept tokens carrying doc char spans
    sentences: list[Sentence]
    annotations: list[Annotation]
    offset_map: list[OffsetEntry]
    stats: NormalizeStats
    page_count: int
    warnings: list[str] = field(default_factory=list)

    @property
    def publication_date(self) -> Optional[date]:
        # manifest date wins; the recurring page header is the fallback
        return self.meta.publication_date or self.header.issue_date


def group_tokens_by_block(tokens: Sequence[NormalizedToken]) -> dict[tuple[str, str], list[NormalizedToken]]:
    grouped: dict[tuple[str, str], list[NormalizedToken]] = {}
    for tok in tokens:
        ref = tok.refs[0]
        grouped.setdefault((ref.page_id, ref.block_id), []).append(tok)
    return grouped


def assemble_document(
    meta: CollectionMeta,
    pages: Sequence[AltoPage],
    *,
    lexicon: Lexicon,
    profiles: Sequence[LanguageProfile] = (),
    gazetteers: Sequence[Gazetteer] = (),
    layout_config: LayoutConfig = LayoutConfig(),
) -> StructuredDocument:
    """Full single-collection assembly from parsed pages.

    The normalized text contains section content only: per section the
    title lines joined by TITLE_JOIN form one segment, each paragraph
    block is one segment, and segments are joined by newlines. Page
    headers and discarded blocks never reach it.
    """
    tokens, stats = normalize_lines(iter_source_lines(pages), lexicon)
    grouped = group_tokens_by_block(tokens)
    blocks = classify_blocks(pages, grouped, layout_config)
    header = extract_header_metadata([b for b in blocks if b.label is Label.HEADER])
    sections = segment_sections(blocks)

    out: list[str] = []
    cursor = 0
    spanned: list[NormalizedToken] = []
    segments: list[Segment] = []

    def emit(piece: str) -> None:
        nonlocal cursor
        out.append(piece)
        cursor += len(piece)

    def lay_tokens(block: LogicalBlock) -> None:
        new_tokens: list[NormalizedToken] = []
        first = True
        for tok in block.tokens:
            if tok.removed:
                new_tokens.append(tok)
                continue
            if not first:
                emit(" ")
            first = False
            start = cursor
            emit(tok.text)
            placed = replace(tok, char_span=(start, cursor))
            new_tokens.append(placed)
            spanned.append(placed)
        block.tokens = new_tokens

    for section in sections:
        if section.title_blocks:
            if segments:
                emit(SEGMENT_JOIN)
            start = cursor
            for i, block in enumerate(section.title_blocks):
                if i:
                    emit(TITLE_JOIN)
                lay_tokens(block)
            segments.append(Segment("title", section.section_id, (start, cursor)))
        for block in section.body_blocks:
            if segments:
                emit(SEGMENT_JOIN)
            start = cursor
            lay_tokens(block)
            segments.append(Segment("para", section.section_id, (start, cursor)))

    normalized_text = "".join(out)

    sentences: list[Sentence] = []
    for seg in segments:
        seg_text = normalized_text[seg.char_span[0]:seg.char_span[1]]
        if seg.kind == "title":
            if seg_text:
                sentences.append(Sentence(len(sentences) + 1, seg.char_span, seg_text))
            continue
        for local in split_sentences(seg_text, layout_config.abbreviations):
            span = (seg.char_span[0] + local.char_span[0], seg.char_span[0] + local.char_span[1])
            sentences.append(Sentence(len(sentences) + 1, span, local.text))

    pub_date = meta.publication_date or header.issue_date
    per_sentence = []
    for sent in sentences:
        local = detect_temporal(sent.text, pub_date) + tag_entities(sent.text, gazetteers)
        per_sentence.append((sent.char_span[0], local))
    annotations = merge_annotations(meta.collection_id, normalized_text, per_sentence, spanned)

    language = meta.language_hint
    confidence: Optional[float] = None
    if profiles:
        detected = detect_language(normalized_text, list(profiles))
        if detected is not None:
            language, confidence = detected

    page_numbers = {p.page_id: p.page_number for p in pages}
    offset_map = []
    for tok in spanned:
        boxes = tuple(
            BoxOnPage(page_numbers[ref.page_id], ref.bbox.x, ref.bbox.y, ref.bbox.w, ref.bbox.h)
            for ref in tok.refs
            if ref.bbox is not None
        )
        if boxes:
            offset_map.append(OffsetEntry(tok.char_span, boxes))

    warnings = list(stats.warnings)
    for page in pages:
        warnings.extend(f"{page.page_id}: {w}" for w in page.warnings)

    return StructuredDocument(
        doc_id=meta.collection_id,
        meta=meta,
        header=header,
        language=language,
        language_confidence=confidence,
        blocks=blocks,
        sections=sections,
        segments=segments,
        normalized_text=normalized_text,
        tokens=spanned,
        sentences=sentences,
        annotations=annotations,
        offset_map=offset_map,
        stats=stats,
        page_count=len(pages),
        warnings=warnings,
    )


def to_docbook(doc: StructuredDocument) -> bytes:
    """Serialize to the DocBook 5 subset, UTF-8 with XML declaration."""
    article = ET.Element(_q("article"), {_XML_ID: doc.doc_id, "version": "5.0"})
    info = ET.SubElement(article, _q("info"))
    ET.SubElement(info, _q("title")).text = doc.meta.title
    pub = doc.publication_date
    if pub is not None:
        ET.SubElement(info, _q("date")).text = pub.isoformat()

    for section in doc.sections:
        sec_el = ET.SubElement(article, _q("section"), {_XML_ID: section.section_id})
        if section.title_blocks:
            ET.SubElement(sec_el, _q("title")).text = TITLE_JOIN.join(
                b.text for b in section.title_blocks
            )
        for block in section.body_blocks:
            ET.SubElement(sec_el, _q("para")).text = block.text

    tree = ET.ElementTree(article)
    ET.indent(tree)
    return ET.tostring(article, encoding="UTF-8", xml_declaration=True)


def validate_docbook(data: bytes | str) -> list[str]:
    """Problems list, empty when the document satisfies the subset."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        return [f"not well-formed: {exc}"]
    problems = []
    if root.tag != _q("article"):
        problems.append(f"root is {root.tag}, expected article")
        return problems
    if not root.get(_XML_ID):
        problems.append("article lacks xml:id")
    for el in root.iter():
        if el.tag not in ALLOWED_TAGS:
            problems.append(f"element {el.tag} outside the allowed subset")
    info = root.find(_q("info"))
    if info is None or info.find(_q("title")) is None:
        problems.append("missing info/title")
    for sec in root.findall(_q("section")):
        if not sec.get(_XML_ID):
            problems.append("section lacks xml:id")
    return problems


def extract_docbook_text(data: bytes | str) -> str:
    """Reconstruct the normalized text from an emitted DocBook file."""
    root = ET.fromstring(data)
    parts: list[str] = []
    for sec in root.findall(_q("section")):
        title = sec.find(_q("title"))
        if title is not None:
            parts.append(title.text or "")
        for para in sec.findall(_q("para")):
            parts.append(para.text or "")
    return SEGMENT_JOIN.join(parts)


def annotations_payload(doc: StructuredDocument) -> dict:
    return {
        "doc_id": doc.doc_id,
        "annotations": [
            {
                "id": ann.annotation_id,
                "kind": ann.kind.value,
                "span": list(ann.span),
                "surface": ann.surface,
                "normalized": ann.normalized,
                "rule_id": ann.rule_id,
                "anchors": [
                    {
                        "page": ref.page_id,
                        "block": ref.block_id,
                        "line": ref.line_id,
                        "token": ref.token_index,
                    }
                    for ref in ann.anchors
                ],
            }
            for ann in doc.annotations
        ],
    }


def offsets_payload(doc: StructuredDocument) -> dict:
    return {
        "doc_id": doc.doc_id,
        "map": [
            {
                "span": list(entry.char_span),
                "boxes": [
                    {"page": b.page, "x": b.x, "y": b.y, "w": b.w, "h": b.h}
                    for b in entry.boxes
                ],
            }
            for entry in doc.offset_map
        ],
    }


@dataclass(frozen=True)
class EmittedBundle:
    doc_id: str
    docbook_path: Path
    ann_path: Path
    off_path: Path


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def write_bundle(doc: StructuredDocument, out_dir: Path | str) -> EmittedBundle:
    """Write the three per-document files; each lands atomically."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    docbook = to_docbook(doc)
    problems = validate_docbook(docbook)
    if problems:
        raise DocBookError(f"{doc.doc_id}: {'; '.join(problems)}")

    paths = EmittedBundle(
        doc_id=doc.doc_id,
        docbook_path=out_dir / f"{doc.doc_id}.docbook.xml",
        ann_path=out_dir / f"{doc.doc_id}.ann.json",
        off_path=out_dir / f"{doc.doc_id}.off.json",
    )
    _atomic_write(paths.docbook_path, docbook + b"\n")
    for path, payload in ((paths.ann_path, annotations_payload(doc)), (paths.off_path, offsets_payload(doc))):
        _atomic_write(path, (json.dumps(payload, ensure_ascii=False, indent=2) + "\n").encode("utf-8"))
    return paths
