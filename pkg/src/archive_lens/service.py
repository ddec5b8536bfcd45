"""HTTP read API over a committed index snapshot.

The app opens the snapshot lazily on first use, so the service can start
before an index exists and begins answering once one is committed. Domain
errors map onto a stable JSON envelope: {"code": ..., "message": ...}.
"""

from __future__ import annotations

from dataclasses import asdict
from pathlib import Path
from typing import Optional, Sequence

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .index import (
    CorruptSnapshot,
    EntityNotFound,
    IndexSnapshot,
    MalformedQuery,
    MissingSnapshot,
    SearchEngine,
    UnknownDocument,
    UnknownField,
)

_ERROR_STATUS = {
    MalformedQuery: 400,
    UnknownField: 400,
    UnknownDocument: 404,
    EntityNotFound: 404,
    MissingSnapshot: 503,
    CorruptSnapshot: 503,
}


def _parse_filters(raw: Sequence[str]) -> list[tuple[str, str]]:
    filters = []
    for item in raw:
        field, sep, value = item.partition(":")
        if not sep or not field or not value:
            raise MalformedQuery(f"filter {item!r} is not of the form field:value")
        filters.append((field, value))
    return filters


def _parse_span(raw: str) -> tuple[int, int]:
    start, sep, end = raw.partition(",")
    try:
        if not sep:
            raise ValueError
        return int(start), int(end)
    except ValueError:
        raise MalformedQuery(f"span {raw!r} is not of the form start,end") from None


def create_app(
    index_dir: Path | str,
    *,
    cors_origins: Sequence[str] = ("*",),
    max_page_size: int = 100,
) -> FastAPI:
    app = FastAPI(title="archive-lens", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["GET"],
        allow_headers=["*"],
    )
    app.state.index_dir = Path(index_dir)
    app.state.engine = None

    def engine() -> SearchEngine:
        # raises MissingSnapshot until a commit lands; retried per request
        if app.state.engine is None:
            snapshot = IndexSnapshot.open(app.state.index_dir)
            app.state.engine = SearchEngine(snapshot, max_limit=max_page_size)
        return app.state.engine

    for exc_type, status in _ERROR_STATUS.items():
        def handler(request: Request, exc: Exception, status: int = status) -> JSONResponse:
            return JSONResponse(
                status_code=status,
                content={"code": type(exc).__name__, "message": str(exc)},
            )
        app.add_exception_handler(exc_type, handler)

    @app.get("/healthz")
    def healthz() -> dict:
        try:
            eng = engine()
        except (MissingSnapshot, CorruptSnapshot) as exc:
            return {"status": "degraded", "snapshot": False, "detail": type(exc).__name__}
        return {
            "status": "ok",
            "snapshot": True,
            "documents": eng.snapshot.doc_count,
            "created": eng.snapshot.created,
        }

    @app.get("/search")
    def search(
        q: str = "",
        filters: list[str] = Query(default=[]),
        facets: list[str] = Query(default=[]),
        offset: int = 0,
        limit: int = 20,
    ) -> dict:
        result = engine().search(
            q, filters=_parse_filters(filters), facets=facets, offset=offset, limit=limit
        )
        return {
            "query": q,
            "total_hits": result.total_hits,
            "offset": offset,
            "limit": limit,
            "hits": [asdict(h) for h in result.hits],
            "facets": {
                field: [{"value": value, "count": count} for value, count in counts.items()]
                for field, counts in result.facet_counts.items()
            },
        }

    @app.get("/documents/{doc_id}")
    def document(doc_id: str) -> dict:
        doc = engine().get_document(doc_id)
        sections: list[dict] = []
        current: Optional[dict] = None
        for seg in doc.segments:
            if current is None or current["section_id"] != seg.section_id:
                current = {"section_id": seg.section_id, "title": None, "paras": []}
                sections.append(current)
            text = doc.text[seg.start:seg.end]
            if seg.kind == "title":
                current["title"] = text
            else:
                current["paras"].append({"text": text, "span": [seg.start, seg.end]})
        return {
            "doc_id": doc.doc_id,
            "title": doc.title,
            "date": doc.date or None,
            "text": doc.text,
            "sections": sections,
            "annotations": engine().get_annotations(doc_id),
        }

    @app.get("/documents/{doc_id}/highlights")
    def highlights(doc_id: str, span: str) -> dict:
        parsed = _parse_span(span)
        return {
            "doc_id": doc_id,
            "span": list(parsed),
            "boxes": engine().highlight_boxes(doc_id, parsed),
        }

    @app.get("/concordance")
    def concordance(
        term: str,
        window: int = 5,
        filters: list[str] = Query(default=[]),
        offset: int = 0,
        limit: int = 50,
    ) -> dict:
        total, rows = engine().concordance(
            term, window=window, filters=_parse_filters(filters), offset=offset, limit=limit
        )
        return {
            "term": term,
            "window": window,
            "total": total,
            "offset": offset,
            "rows": [asdict(r) for r in rows],
        }

    @app.get("/timeline")
    def timeline(term: str) -> dict:
        result = engine().term_timeline(term)
        return {
            "term": result.term,
            "series": [{"year": year, "count": count} for year, count in result.series],
            "undated_docs": result.undated_docs,
        }

    @app.get("/entities/{kind}/{name}")
    def entity(kind: str, name: str, offset: int = 0, limit: int = 10) -> dict:
        card = engine().entity_card(kind, name, offset=offset, limit=limit)
        return {
            "kind": card.kind,
            "name": card.name,
            "mention_count": card.mention_count,
            "document_count": card.document_count,
            "documents": [asdict(d) for d in card.documents],
            "co_mentions": [
                {"kind": k, "name": n, "shared_docs": c} for k, n, c in card.co_mentions
            ],
        }

    return app
