"""Persisted inverted index: snapshot format, builder, query language, engine."""

from .build import BundleRef, CorruptBundle, DuplicateDocId, build_index, norm_term
from .engine import (
    ConcordanceRow,
    EntityCard,
    EntityNotFound,
    Hit,
    SearchEngine,
    SearchResult,
    TimelineResult,
    UnknownDocument,
    UnknownField,
)
from .query import MalformedQuery, parse_query
from .snapshot import CorruptSnapshot, IndexSnapshot, MissingSnapshot, StoredDocument

__all__ = [
    "BundleRef",
    "ConcordanceRow",
    "CorruptBundle",
    "CorruptSnapshot",
    "DuplicateDocId",
    "EntityCard",
    "EntityNotFound",
    "Hit",
    "IndexSnapshot",
    "MalformedQuery",
    "MissingSnapshot",
    "SearchEngine",
    "SearchResult",
    "StoredDocument",
    "TimelineResult",
    "UnknownDocument",
    "UnknownField",
    "build_index",
    "norm_term",
    "parse_query",
]
