"""ALTO XML ingestion.

Parses one ALTO page file (the BnF delivery format, versions 2.x and 4.x)
into a physical-layout model: blocks, lines, tokens with bounding boxes,
text styles, and end-of-line hyphenation marks (HYP). Only the elements
Layout/Page/PrintSpace/TextBlock/TextLine/String/SP/HYP and
Styles/TextStyle are consumed; anything else is ignored and counted.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Iterable, Optional

from .errors import ArchiveLensError


class MalformedXml(ArchiveLensError):
    """The input is not well-formed XML or has no ALTO Layout/Page."""


class MissingPrintSpace(ArchiveLensError):
    """The page carries no PrintSpace element; the page is skipped."""


class ManifestError(ArchiveLensError):
    """The batch manifest is malformed or violates its invariants."""


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box in page pixel coordinates."""

    x: int
    y: int
    w: int
    h: int

    def within(self, width: int, height: int) -> bool:
        return self.x >= 0 and self.y >= 0 and self.x + self.w <= width and self.y + self.h <= height

    @property
    def center_y(self) -> float:
        return self.y + self.h / 2.0


@dataclass(frozen=True)
class StyleInfo:
    style_id: str
    font_size: float
    bold: bool = False


@dataclass(frozen=True)
class TokenSpan:
    content: str
    bbox: Optional[BBox]
    confidence: Optional[float] = None
    style_ref: Optional[str] = None


@dataclass(frozen=True)
class TextLine:
    line_id: str
    bbox: Optional[BBox]
    tokens: tuple[TokenSpan, ...]
    trailing_hyphen: bool = False


@dataclass(frozen=True)
class TextBlock:
    block_id: str
    bbox: Optional[BBox]
    lines: tuple[TextLine, ...]
    style_ref: Optional[str] = None


@dataclass(frozen=True)
class CollectionMeta:
    collection_id: str
    title: str
    publication_date: Optional[date] = None
    language_hint: Optional[str] = None
    source_uri: str = ""

    def __post_init__(self) -> None:
        if not self.collection_id:
            raise ValueError("collection_id must be non-empty")


@dataclass
class AltoPage:
    page_id: str
    page_number: int
    width: int
    height: int
    styles: tuple[StyleInfo, ...]
    blocks: tuple[TextBlock, ...]
    warnings: list[str] = field(default_factory=list)

    def style_map(self) -> dict[str, StyleInfo]:
        return {s.style_id: s for s in self.styles}

    def iter_tokens(self) -> Iterable[tuple[TextBlock, TextLine, int, TokenSpan]]:
        for block in self.blocks:
            for line in block.lines:
                for i, token in enumerate(line.tokens):
                    yield block, line, i, token


@dataclass(frozen=True)
class Diagnostic:
    code: str
    where: str
    message: str


_CONSUMED = {
    "alto", "Layout", "Page", "PrintSpace", "TextBlock", "TextLine",
    "String", "SP", "HYP", "Styles", "TextStyle", "ComposedBlock",
    # standard header metadata, read nowhere but not worth a warning
    "Description", "MeasurementUnit", "sourceImageInformation", "fileName",
    "OCRProcessing", "ocrProcessingStep", "processingSoftware",
    "softwareName", "softwareVersion", "processingDateTime", "Tags",
}


def _local(tag: object) -> str:
    # tags may be Comment/PI callables; only plain element tags matter
    if not isinstance(tag, str):
        return ""
    return tag.rsplit("}", 1)[-1]


def _int_attr(el: ET.Element, name: str) -> Optional[int]:
    raw = el.get(name)
    if raw is None:
        return None
    try:
        return int(round(float(raw)))
    except ValueError:
        return None


def _bbox_of(el: ET.Element) -> Optional[BBox]:
    x = _int_attr(el, "HPOS")
    y = _int_attr(el, "VPOS")
    w = _int_attr(el, "WIDTH")
    h = _int_attr(el, "HEIGHT")
    if None in (x, y, w, h):
        return None
    return BBox(x, y, w, h)


def parse_alto(data: bytes | str, meta: CollectionMeta, page_number: int = 1) -> AltoPage:
    """Parse one ALTO XML page into an AltoPage.

    Every String element becomes a token; a HYP as the last child of a line
    sets trailing_hyphen; block reading order is document order. Tokens
    without geometry are kept with bbox=None (counted warning). Raises
    MalformedXml on unparseable input and MissingPrintSpace when the page
    has no PrintSpace.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedXml(f"unparseable ALTO input: {exc}") from exc

    warnings: list[str] = []
    ignored: Counter[str] = Counter()
    missing_geometry = 0

    styles: list[StyleInfo] = []
    page_el: Optional[ET.Element] = None
    for el in root.iter():
        name = _local(el.tag)
        if name == "TextStyle":
            style_id = el.get("ID") or f"style{len(styles)}"
            try:
                size = float(el.get("FONTSIZE", "0"))
            except ValueError:
                size = 0.0
            bold = "bold" in (el.get("FONTSTYLE") or "").lower()
            styles.append(StyleInfo(style_id, size, bold))
        elif name == "Page" and page_el is None:
            page_el = el
        elif name and name not in _CONSUMED:
            ignored[name] += 1

    if page_el is None:
        raise MalformedXml("no Layout/Page element found")

    printspace = next((el for el in page_el.iter() if _local(el.tag) == "PrintSpace"), None)
    if printspace is None:
        raise MissingPrintSpace(f"page in collection {meta.collection_id!r} has no PrintSpace")

    page_id = page_el.get("ID") or f"{meta.collection_id}-p{page_number}"
    width = _int_attr(page_el, "WIDTH") or 0
    height = _int_attr(page_el, "HEIGHT") or 0

    blocks: list[TextBlock] = []
    for block_el in printspace.iter():
        if _local(block_el.tag) != "TextBlock":
            continue
        block_id = block_el.get("ID") or f"{page_id}-b{len(blocks)}"
        block_style = block_el.get("STYLEREFS")
        lines: list[TextLine] = []
        for line_el in block_el:
            if _local(line_el.tag) != "TextLine":
                continue
            line_id = line_el.get("ID") or f"{block_id}-l{len(lines)}"
            line_style = line_el.get("STYLEREFS") or block_style
            tokens: list[TokenSpan] = []
            children = [ch for ch in line_el if _local(ch.tag)]
            for ch in children:
                name = _local(ch.tag)
                if name != "String":
                    continue
                content = ch.get("CONTENT") or ""
                if not content:
                    warnings.append(f"empty String in line {line_id} dropped")
                    continue
                bbox = _bbox_of(ch)
                if bbox is None:
                    missing_geometry += 1
                wc = ch.get("WC")
                confidence = None
                if wc is not None:
                    try:
                        confidence = min(1.0, max(0.0, float(wc)))
                    except ValueError:
                        confidence = None
                tokens.append(TokenSpan(
                    content=content,
                    bbox=bbox,
                    confidence=confidence,
                    style_ref=ch.get("STYLEREFS") or line_style,
                ))
            trailing = bool(children) and _local(children[-1].tag) == "HYP"
            lines.append(TextLine(line_id, _bbox_of(line_el), tuple(tokens), trailing))
        blocks.append(TextBlock(block_id, _bbox_of(block_el), tuple(lines), block_style))

    if missing_geometry:
        warnings.append(f"{missing_geometry} token(s) without geometry kept with no bbox")
    for name, count in sorted(ignored.items()):
        warnings.append(f"ignored element {name} x{count}")

    return AltoPage(
        page_id=page_id,
        page_number=page_number,
        width=width,
        height=height,
        styles=tuple(styles),
        blocks=tuple(blocks),
        warnings=warnings,
    )


def validate_page(page: AltoPage) -> list[Diagnostic]:
    """Collect invariant violations without mutating the page."""
    diags: list[Diagnostic] = []
    seen_blocks: set[str] = set()
    seen_lines: set[str] = set()

    def check_bounds(bbox: Optional[BBox], where: str) -> None:
        if bbox is None or page.width <= 0 or page.height <= 0:
            return
        if not bbox.within(page.width, page.height):
            diags.append(Diagnostic("OutOfBounds", where, f"bbox {bbox} exceeds page {page.width}x{page.height}"))

    for block in page.blocks:
        if block.block_id in seen_blocks:
            diags.append(Diagnostic("DuplicateId", block.block_id, "duplicate block id"))
        seen_blocks.add(block.block_id)
        check_bounds(block.bbox, f"block {block.block_id}")
        for line in block.lines:
            if line.line_id in seen_lines:
                diags.append(Diagnostic("DuplicateId", line.line_id, "duplicate line id"))
            seen_lines.add(line.line_id)
            check_bounds(line.bbox, f"line {line.line_id}")
            last_x = None
            for i, token in enumerate(line.tokens):
                check_bounds(token.bbox, f"token {i} in line {line.line_id}")
                if token.bbox is not None:
                    if last_x is not None and token.bbox.x < last_x:
                        diags.append(Diagnostic("TokenOrder", line.line_id, "tokens not left-to-right"))
                        last_x = None
                        break
                    last_x = token.bbox.x
    for style in page.styles:
        if style.font_size <= 0:
            diags.append(Diagnostic("BadStyle", style.style_id, "font_size must be > 0"))
    return diags


@dataclass(frozen=True)
class BatchEntry:
    """One manifest entry: a collection holding a single publication."""

    meta: CollectionMeta
    files: tuple[Path, ...]


def load_manifest(path: Path | str) -> list[BatchEntry]:
    """Read a batch manifest: a JSON list of {collection_id, title,
    publication_date, files[]} objects (file paths relative to the manifest).
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    if isinstance(raw, dict):
        raw = raw.get("collections", [])
    if not isinstance(raw, list):
        raise ManifestError("manifest must be a JSON list of collection entries")

    entries: list[BatchEntry] = []
    seen: set[str] = set()
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise ManifestError(f"manifest entry {i} is not an object")
        cid = item.get("collection_id") or ""
        if not cid:
            raise ManifestError(f"manifest entry {i} has no collection_id")
        if cid in seen:
            raise ManifestError(f"duplicate collection_id {cid!r}")
        seen.add(cid)
        pub = item.get("publication_date")
        pub_date = None
        if pub:
            try:
                pub_date = date.fromisoformat(pub)
            except ValueError as exc:
                raise ManifestError(f"collection {cid!r}: bad publication_date {pub!r}") from exc
        files = tuple((path.parent / f).resolve() for f in item.get("files", []))
        entries.append(BatchEntry(
            meta=CollectionMeta(
                collection_id=cid,
                title=item.get("title", cid),
                publication_date=pub_date,
                language_hint=item.get("language_hint"),
                source_uri=item.get("source_uri", ""),
            ),
            files=files,
        ))
    return entries
