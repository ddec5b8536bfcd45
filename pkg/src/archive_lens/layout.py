"""Logical layout analysis.

Labels physical blocks as header, title, paragraph or other with
first-matching rules over geometry, styles and collection statistics;
splits paragraph text into sentences; groups blocks into sections
(a run of titles followed by its paragraphs).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from statistics import median
from typing import Optional, Sequence

from .alto import AltoPage
from .normalize import NormalizedToken


class Label(str, Enum):
    TITLE = "title"
    HEADER = "header"
    PARAGRAPH = "paragraph"
    OTHER = "other"


# The paper lists only "N.B." and "P.S." as examples; the rest are the
# usual French abbreviations that precede capitalized words.
DEFAULT_ABBREVIATIONS = frozenset({
    "N.B.", "P.S.", "M.", "MM.", "Mme", "Mlle", "St", "Ste", "etc.", "art.", "fr.",
})


@dataclass(frozen=True)
class LayoutConfig:
    header_band: float = 0.08        # top fraction of the page for headers
    header_recurrence: float = 0.5   # fraction of pages a header must recur on
    title_font_ratio: float = 1.3    # block median font vs document body median
    title_max_tokens: int = 10       # cap for the all-caps title rule
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS


@dataclass
class LogicalBlock:
    page_id: str
    block_id: str
    label: Label
    rule_fired: str
    text: str
    tokens: list[NormalizedToken]
    line_count: int
    page_metadata: bool = False

    @property
    def token_count(self) -> int:
        return sum(1 for t in self.tokens if not t.removed)


@dataclass(frozen=True)
class Sentence:
    sentence_id: int
    char_span: tuple[int, int]
    text: str


@dataclass
class Section:
    section_id: str
    title_blocks: list[LogicalBlock] = field(default_factory=list)
    body_blocks: list[LogicalBlock] = field(default_factory=list)

    @property
    def is_preamble(self) -> bool:
        return not self.title_blocks


_DIGITS = re.compile(r"\d+")


def _recurrence_key(text: str) -> str:
    # headers repeat up to page numbers / dates, so digits are ignored
    return " ".join(_DIGITS.sub("", text.casefold()).split())


def classify_blocks(
    pages: Sequence[AltoPage],
    tokens_by_block: dict[tuple[str, str], list[NormalizedToken]],
    config: LayoutConfig = LayoutConfig(),
) -> list[LogicalBlock]:
    """Label every block of one collection's pages.

    Two passes: collection statistics first (body median font size,
    recurring top-band line texts), then first-matching rules per block:
    H1 header, T1 title, O1 emptied by normalization, P1 paragraph.
    Statistics never leave the collection, so labels are stable under
    batch reordering.
    """
    styles = {}
    for page in pages:
        styles.update({(page.page_id, s.style_id): s.font_size for s in page.styles})

    font_sizes: list[float] = []
    band_keys_per_page: list[set[str]] = []
    for page in pages:
        page_keys: set[str] = set()
        for block in page.blocks:
            tokens = tokens_by_block.get((page.page_id, block.block_id), [])
            text = " ".join(t.text for t in tokens if not t.removed)
            for line in block.lines:
                for tok in line.tokens:
                    size = styles.get((page.page_id, tok.style_ref))
                    if size:
                        font_sizes.append(size)
            if (
                len(block.lines) == 1
                and text
                and block.bbox is not None
                and page.height > 0
                and block.bbox.center_y <= config.header_band * page.height
            ):
                page_keys.add(_recurrence_key(text))
        band_keys_per_page.append(page_keys)

    body_median = median(font_sizes) if font_sizes else 0.0
    n_pages = len(pages)
    key_pages: Counter[str] = Counter()
    for keys in band_keys_per_page:
        key_pages.update(keys)

    out: list[LogicalBlock] = []
    for page in pages:
        for block in page.blocks:
            tokens = tokens_by_block.get((page.page_id, block.block_id), [])
            kept = [t for t in tokens if not t.removed]
            text = " ".join(t.text for t in kept)

            def mk(label: Label, rule: str) -> LogicalBlock:
                return LogicalBlock(
                    page_id=page.page_id,
                    block_id=block.block_id,
                    label=label,
                    rule_fired=rule,
                    text=text,
                    tokens=tokens,
                    line_count=len(block.lines),
                    page_metadata=label is Label.HEADER,
                )

            in_band = (
                len(block.lines) == 1
                and block.bbox is not None
                and page.height > 0
                and block.bbox.center_y <= config.header_band * page.height
            )
            if (
                text
                and in_band
                and n_pages > 0
                and key_pages[_recurrence_key(text)] / n_pages >= config.header_recurrence
            ):
                out.append(mk(Label.HEADER, "H1"))
                continue

            block_sizes = [
                styles[(page.page_id, tok.style_ref)]
                for line in block.lines
                for tok in line.tokens
                if styles.get((page.page_id, tok.style_ref))
            ]
            big_font = bool(block_sizes) and body_median > 0 and median(block_sizes) >= config.title_font_ratio * body_median
            caps_line = (
                len(block.lines) == 1
                and text
                and text.isupper()
                and len(kept) <= config.title_max_tokens
            )
            if text and (big_font or caps_line):
                out.append(mk(Label.TITLE, "T1"))
                continue

            if not text:
                out.append(mk(Label.OTHER, "O1"))
                continue

            out.append(mk(Label.PARAGRAPH, "P1"))
    return out


_TERMINATOR_RUN = re.compile(r"[.?!]+")


def split_sentences(text: str, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS) -> list[Sentence]:
    """Split normalized paragraph text into sentences.

    A boundary is a run of  . ? !  followed by whitespace and a capital
    letter or digit, unless the word ending at the run is a known
    abbreviation. Unterminated trailing text forms the final sentence.
    """
    sentences: list[Sentence] = []
    start = 0

    def emit(end: int) -> None:
        nonlocal start
        s, e = start, end
        while s < e and text[s].isspace():
            s += 1
        while e > s and text[e - 1].isspace():
            e -= 1
        if e > s:
            sentences.append(Sentence(len(sentences), (s, e), text[s:e]))
        start = end

    for match in _TERMINATOR_RUN.finditer(text):
        end = match.end()
        follow = end
        while follow < len(text) and text[follow].isspace():
            follow += 1
        if follow == end or follow >= len(text):
            continue  # no whitespace after the run, or nothing follows
        nxt = text[follow]
        if not (nxt.isupper() or nxt.isdigit()):
            continue
        word_start = end
        while word_start > 0 and not text[word_start - 1].isspace():
            word_start -= 1
        if text[word_start:end] in abbreviations:
            continue
        emit(end)

    emit(len(text))
    return sentences


def segment_sections(blocks: Sequence[LogicalBlock]) -> list[Section]:
    """Group classified blocks into sections: each maximal run of titles
    opens one, paragraphs attach to the current one, paragraphs before any
    title form a title-less preamble. Headers and Other blocks are skipped.
    """
    sections: list[Section] = []
    current: Optional[Section] = None
    in_title_run = False

    def new_section() -> Section:
        section = Section(section_id=f"sec-{len(sections) + 1:03d}")
        sections.append(section)
        return section

    for block in blocks:
        if block.label is Label.TITLE:
            if not in_title_run:
                current = new_section()
                in_title_run = True
            current.title_blocks.append(block)
        elif block.label is Label.PARAGRAPH:
            in_title_run = False
            if current is None:
                current = new_section()
            current.body_blocks.append(block)
        else:
            continue
    return sections


@dataclass(frozen=True)
class HeaderMetadata:
    masthead: Optional[str] = None
    issue_date: Optional[date] = None
    issue_number: Optional[str] = None


_ISSUE_NO = re.compile(r"\b[Nn][°ºo]?\.?\s*(\d+)\b")
_EDGE_PUNCT = re.compile(r"^[\s\W]+|[\s\W]+$", re.UNICODE)


def _plurality(values: list) -> Optional[object]:
    # plurality vote, ties resolved by first occurrence in reading order
    if not values:
        return None
    counts = Counter(values)
    top = max(counts.values())
    for v in values:
        if counts[v] == top:
            return v
    return None


def extract_header_metadata(headers: Sequence[LogicalBlock]) -> HeaderMetadata:
    """Masthead, issue date and issue number from recurring page headers.

    The masthead is the header text with temporal expressions and issue
    numbers removed; date and masthead are plurality votes over all
    headers, first-in-reading-order on ties.
    """
    from .annotate import detect_temporal  # late import, annotate depends on layout types

    mastheads: list[str] = []
    dates: list[date] = []
    numbers: list[str] = []
    for block in headers:
        text = block.text
        spans: list[tuple[int, int]] = []
        for ann in detect_temporal(Sentence(0, (0, len(text)), text), pub_date=None):
            spans.append(ann.span)
            if ann.normalized and len(ann.normalized) == 10:
                dates.append(date.fromisoformat(ann.normalized))
        number_match = _ISSUE_NO.search(text)
        if number_match:
            spans.append(number_match.span())
            numbers.append(number_match.group(1))
        remainder = list(text)
        for s, e in spans:
            remainder[s:e] = [" "] * (e - s)
        cleaned = _EDGE_PUNCT.sub("", " ".join("".join(remainder).split()))
        if cleaned:
            mastheads.append(cleaned)

    return HeaderMetadata(
        masthead=_plurality(mastheads),
        issue_date=_plurality(dates),
        issue_number=_plurality(numbers),
    )
