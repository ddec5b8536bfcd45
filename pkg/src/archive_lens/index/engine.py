"""Read side of the index: boolean search with BM25 ranking, facet
counts, KWIC concordance, term timeline and entity cards.

All operations run against one immutable snapshot; swapping in a newer
snapshot means constructing a new engine.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from ..errors import ArchiveLensError
from . import query as q
from .build import TermOccurrence, iter_terms, norm_term
from .query import MalformedQuery, parse_query
from .snapshot import IndexSnapshot, Posting, StoredDocument

BM25_K1 = 1.2
BM25_B = 0.75
FACET_FIELDS = ("collection", "year", "person", "place", "temporal")
FACET_VALUE_CAP = 100
SNIPPET_RADIUS = 60
MAX_MATCH_SPANS = 20


class UnknownField(ArchiveLensError):
    pass


class UnknownDocument(ArchiveLensError):
    pass


class EntityNotFound(ArchiveLensError):
    pass


@dataclass(frozen=True)
class Hit:
    doc_id: str
    title: str
    date: str
    score: float
    snippet: str
    snippet_start: int
    match_spans: tuple[tuple[int, int], ...]  # document char space
    boxes: tuple[dict, ...]


@dataclass(frozen=True)
class SearchResult:
    total_hits: int
    hits: tuple[Hit, ...]
    facet_counts: dict[str, dict[str, int]] = field(default_factory=dict)


@dataclass(frozen=True)
class ConcordanceRow:
    doc_id: str
    left: str
    keyword: str
    right: str
    start: int
    end: int


@dataclass(frozen=True)
class TimelineResult:
    term: str
    series: tuple[tuple[int, int], ...]  # (year, occurrence count), year ascending
    undated_docs: int


@dataclass(frozen=True)
class DocMention:
    doc_id: str
    title: str
    date: str
    mentions: int


@dataclass(frozen=True)
class EntityCard:
    kind: str
    name: str
    mention_count: int
    document_count: int
    documents: tuple[DocMention, ...]
    co_mentions: tuple[tuple[str, str, int], ...]  # (kind, name, shared docs)


class SearchEngine:
    def __init__(self, snapshot: IndexSnapshot, max_limit: int = 100):
        self.snapshot = snapshot
        self.max_limit = max_limit
        self._docs = snapshot.documents
        self._all = frozenset(range(len(self._docs)))
        self._ord_by_id = {doc.doc_id: i for i, doc in enumerate(self._docs)}
        self._avgdl = snapshot.avgdl

        self._facet_docs: dict[str, dict[str, set[int]]] = {f: {} for f in FACET_FIELDS}
        self._facet_display: dict[str, dict[str, str]] = {f: {} for f in FACET_FIELDS}
        for ord_, doc in enumerate(self._docs):
            for fld, values in self._facet_values(doc).items():
                for value in values:
                    folded = value.casefold()
                    self._facet_docs[fld].setdefault(folded, set()).add(ord_)
                    self._facet_display[fld].setdefault(folded, value)

        self._entities: dict[tuple[str, str], list[tuple[int, int]]] = {}
        self._entity_display: dict[tuple[str, str], str] = {}
        for ord_, doc in enumerate(self._docs):
            for kind, name, count in doc.mentions:
                key = (kind, name.casefold())
                self._entities.setdefault(key, []).append((ord_, count))
                self._entity_display.setdefault(key, name)

        self._off_cache: dict[str, list] = {}

    @staticmethod
    def _facet_values(doc: StoredDocument) -> dict[str, Sequence[str]]:
        return {
            "collection": (doc.doc_id,),
            "year": (doc.year,) if doc.year else (),
            "person": doc.persons,
            "place": doc.places,
            "temporal": doc.temporal_years,
        }

    # ------------------------------------------------------------- search

    def search(
        self,
        q_text: str = "",
        filters: Sequence[tuple[str, str]] = (),
        facets: Sequence[str] = (),
        offset: int = 0,
        limit: int = 10,
    ) -> SearchResult:
        if not 1 <= limit <= self.max_limit:
            raise MalformedQuery(f"limit must be between 1 and {self.max_limit}")
        if offset < 0:
            raise MalformedQuery("offset must be non-negative")
        for fld in facets:
            self._check_field(fld)

        docs = set(self._all)
        scoring_terms: list[str] = []
        if q_text.strip():
            ast = parse_query(q_text)
            docs &= self._eval(ast)
            scoring_terms = self._scoring_terms(ast)
        for fld, value in filters:
            docs &= self._filter_docs(fld, value)

        scored = sorted(
            ((self._bm25(ord_, scoring_terms), ord_) for ord_ in docs),
            key=lambda pair: (-pair[0], self._docs[pair[1]].doc_id),
        )
        page = scored[offset:offset + limit]
        hits = tuple(self._make_hit(ord_, score, scoring_terms) for score, ord_ in page)

        facet_counts: dict[str, dict[str, int]] = {}
        for fld in facets:
            counts: dict[str, int] = {}
            for ord_ in docs:
                for value in self._facet_values(self._docs[ord_])[fld]:
                    counts[value] = counts.get(value, 0) + 1
            ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
            facet_counts[fld] = dict(ordered[:FACET_VALUE_CAP])

        return SearchResult(total_hits=len(docs), hits=hits, facet_counts=facet_counts)

    def _check_field(self, fld: str) -> None:
        if fld not in FACET_FIELDS:
            raise UnknownField(f"unknown field {fld!r}")

    def _filter_docs(self, fld: str, value: str) -> set[int]:
        self._check_field(fld)
        return set(self._facet_docs[fld].get(value.casefold(), set()))

    def _postings(self, term: str) -> tuple[Posting, ...]:
        return self.snapshot.postings.get(term, ())

    def _eval(self, node: q.Node) -> set[int]:
        if isinstance(node, q.Term):
            term = norm_term(node.text)
            return {p.doc_ord for p in self._postings(term)} if term else set()
        if isinstance(node, q.Phrase):
            return self._eval_phrase(node)
        if isinstance(node, q.FieldFilter):
            return self._filter_docs(node.field, node.value)
        if isinstance(node, q.And):
            docs = set(self._all)
            for part in node.parts:
                docs &= self._eval(part)
            return docs
        if isinstance(node, q.Or):
            docs: set[int] = set()
            for part in node.parts:
                docs |= self._eval(part)
            return docs
        if isinstance(node, q.Not):
            return set(self._all) - self._eval(node.part)
        raise MalformedQuery(f"unsupported query node {node!r}")

    def _eval_phrase(self, node: q.Phrase) -> set[int]:
        terms = [t for t in (norm_term(w) for w in node.words) if t]
        if not terms:
            return set()
        if len(terms) == 1:
            return {p.doc_ord for p in self._postings(terms[0])}
        per_term = [{p.doc_ord: p.positions for p in self._postings(t)} for t in terms]
        docs = set(per_term[0])
        for d in per_term[1:]:
            docs &= set(d)
        matched = set()
        for ord_ in docs:
            rest = [set(per_term[k][ord_]) for k in range(1, len(terms))]
            for pos in per_term[0][ord_]:
                if all(pos + k in rest[k - 1] for k in range(1, len(terms))):
                    matched.add(ord_)
                    break
        return matched

    def _scoring_terms(self, node: q.Node, negated: bool = False) -> list[str]:
        if isinstance(node, q.Term):
            term = norm_term(node.text)
            return [term] if term and not negated else []
        if isinstance(node, q.Phrase):
            return [t for t in (norm_term(w) for w in node.words) if t] if not negated else []
        if isinstance(node, q.FieldFilter):
            return []
        if isinstance(node, (q.And, q.Or)):
            out: list[str] = []
            for part in node.parts:
                out.extend(self._scoring_terms(part, negated))
            return out
        if isinstance(node, q.Not):
            return self._scoring_terms(node.part, True)
        return []

    def _bm25(self, ord_: int, terms: Sequence[str]) -> float:
        if not terms:
            return 0.0
        doc = self._docs[ord_]
        n = len(self._docs)
        score = 0.0
        for term in terms:
            plist = self._postings(term)
            df = len(plist)
            if df == 0:
                continue
            tf = 0
            for p in plist:
                if p.doc_ord == ord_:
                    tf = p.tf
                    break
            if tf == 0:
                continue
            idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
            denom = tf + BM25_K1 * (1.0 - BM25_B + BM25_B * doc.token_length / self._avgdl)
            score += idf * tf * (BM25_K1 + 1.0) / denom
        return score

    def _make_hit(self, ord_: int, score: float, scoring_terms: Sequence[str]) -> Hit:
        doc = self._docs[ord_]
        wanted = set(scoring_terms)
        spans = []
        if wanted:
            for occ in iter_terms(doc.text, doc.segments):
                if occ.term in wanted:
                    spans.append((occ.start, occ.end))
                    if len(spans) >= MAX_MATCH_SPANS:
                        break
        if spans:
            first = spans[0]
            start = self._snap_left(doc.text, max(0, first[0] - SNIPPET_RADIUS))
            end = self._snap_right(doc.text, min(len(doc.text), first[1] + SNIPPET_RADIUS))
        else:
            start = 0
            end = self._snap_right(doc.text, min(len(doc.text), 2 * SNIPPET_RADIUS))
        in_window = tuple(s for s in spans if s[0] >= start and s[1] <= end)
        return Hit(
            doc_id=doc.doc_id,
            title=doc.title,
            date=doc.date,
            score=score,
            snippet=doc.text[start:end],
            snippet_start=start,
            match_spans=in_window if in_window else tuple(spans),
            boxes=tuple(self._boxes_for_spans(doc, spans[:5])),
        )

    @staticmethod
    def _snap_left(text: str, pos: int) -> int:
        while pos > 0 and pos < len(text) and not text[pos - 1].isspace():
            pos += 1
            if pos >= len(text):
                return len(text)
        return pos

    @staticmethod
    def _snap_right(text: str, pos: int) -> int:
        while pos < len(text) and not text[pos].isspace() and pos > 0:
            pos += 1
        return pos

    def _offsets(self, doc: StoredDocument) -> list:
        cached = self._off_cache.get(doc.off_path)
        if cached is None:
            try:
                data = json.loads(Path(doc.off_path).read_text(encoding="utf-8"))
                cached = data.get("map", [])
            except (OSError, ValueError):
                cached = []
            self._off_cache[doc.off_path] = cached
        return cached

    def _boxes_for_spans(self, doc: StoredDocument, spans: Sequence[tuple[int, int]]) -> list[dict]:
        boxes: list[dict] = []
        if not spans:
            return boxes
        entries = self._offsets(doc)
        for s, e in spans:
            for entry in entries:
                es, ee = entry.get("span", (0, 0))
                if es < e and s < ee:
                    boxes.extend(entry.get("boxes", []))
        return boxes

    # -------------------------------------------------------- concordance

    def concordance(
        self,
        term: str,
        window: int = 5,
        filters: Sequence[tuple[str, str]] = (),
        offset: int = 0,
        limit: int = 100,
    ) -> tuple[int, list[ConcordanceRow]]:
        """All occurrences as KWIC rows with up to `window` context tokens
        per side, context confined to the occurrence's own segment. Returns
        (total row count, requested page).
        """
        if window < 1:
            raise MalformedQuery("window must be >= 1")
        normed = norm_term(term)
        if not normed:
            raise MalformedQuery("empty concordance term")
        docs = set(self._all)
        for fld, value in filters:
            docs &= self._filter_docs(fld, value)

        rows: list[ConcordanceRow] = []
        for ord_ in sorted(docs, key=lambda o: self._docs[o].doc_id):
            doc = self._docs[ord_]
            for seg in doc.segments:
                toks = list(iter_terms(doc.text, (seg,)))
                for i, occ in enumerate(toks):
                    if occ.term != normed:
                        continue
                    left_toks = toks[max(0, i - window):i]
                    right_toks = toks[i + 1:i + 1 + window]
                    left = doc.text[left_toks[0].start:occ.start].strip() if left_toks else ""
                    right = doc.text[occ.end:right_toks[-1].end].strip() if right_toks else ""
                    rows.append(ConcordanceRow(
                        doc_id=doc.doc_id,
                        left=left,
                        keyword=doc.text[occ.start:occ.end],
                        right=right,
                        start=occ.start,
                        end=occ.end,
                    ))
        return len(rows), rows[offset:offset + limit]

    # ----------------------------------------------------------- timeline

    def term_timeline(self, term: str) -> TimelineResult:
        """Occurrence counts by publication year; docs without a date are
        excluded from the series and reported as a count.
        """
        normed = norm_term(term)
        per_year: dict[int, int] = {}
        undated = 0
        if normed:
            for posting in self._postings(normed):
                doc = self._docs[posting.doc_ord]
                if doc.year.isdigit():
                    year = int(doc.year)
                    per_year[year] = per_year.get(year, 0) + posting.tf
                else:
                    undated += 1
        series = tuple(sorted(per_year.items()))
        return TimelineResult(term=normed, series=series, undated_docs=undated)

    # ------------------------------------------------------- entity cards

    def entity_card(self, kind: str, name: str, offset: int = 0, limit: int = 10) -> EntityCard:
        if kind not in ("person", "place", "temporal"):
            raise UnknownField(f"unknown entity kind {kind!r}")
        key = (kind, name.casefold())
        entries = self._entities.get(key)
        if not entries:
            raise EntityNotFound(f"no {kind} entity named {name!r}")

        mention_count = sum(count for _, count in entries)
        ranked = sorted(entries, key=lambda e: (-e[1], self._docs[e[0]].doc_id))
        documents = tuple(
            DocMention(
                doc_id=self._docs[ord_].doc_id,
                title=self._docs[ord_].title,
                date=self._docs[ord_].date,
                mentions=count,
            )
            for ord_, count in ranked[offset:offset + limit]
        )

        shared: dict[tuple[str, str], int] = {}
        for ord_, _ in entries:
            for other_kind, other_name, _count in self._docs[ord_].mentions:
                other_key = (other_kind, other_name.casefold())
                if other_key == key:
                    continue
                shared[other_key] = shared.get(other_key, 0) + 1
        co = sorted(
            ((k, self._entity_display[k], n) for k, n in shared.items()),
            key=lambda item: (-item[2], item[0][0], item[1]),
        )
        co_mentions = tuple((k[0], display, n) for k, display, n in co[:10])

        return EntityCard(
            kind=kind,
            name=self._entity_display[key],
            mention_count=mention_count,
            document_count=len(entries),
            documents=documents,
            co_mentions=co_mentions,
        )

    # ---------------------------------------------------------- documents

    def get_document(self, doc_id: str) -> StoredDocument:
        ord_ = self._ord_by_id.get(doc_id)
        if ord_ is None:
            raise UnknownDocument(doc_id)
        return self._docs[ord_]

    def get_annotations(self, doc_id: str) -> list[dict]:
        doc = self.get_document(doc_id)
        try:
            data = json.loads(Path(doc.ann_path).read_text(encoding="utf-8"))
        except (OSError, ValueError):
            return []
        return data.get("annotations", [])

    def highlight_boxes(self, doc_id: str, span: tuple[int, int]) -> list[dict]:
        doc = self.get_document(doc_id)
        s, e = span
        if not (0 <= s < e <= len(doc.text)):
            raise MalformedQuery(f"span [{s},{e}) outside document of length {len(doc.text)}")
        return self._boxes_for_spans(doc, [(s, e)])
