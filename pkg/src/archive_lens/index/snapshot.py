"""On-disk snapshot: immutable, self-describing index directory.

Layout: docs.bin (document store), facets.bin (per-document facet values
and entity mention counts), terms.bin (term dictionary), postings.bin
(postings with positions), and manifest.json. The manifest carries the
corpus statistics and the sha256 of every segment file; it is written
last, so a directory without it is an uncommitted build.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import BinaryIO, Mapping, Sequence

from ..errors import ArchiveLensError
from . import codec
from .codec import CorruptSnapshot

FILES = {
    "documents": "docs.bin",
    "facets": "facets.bin",
    "terms": "terms.bin",
    "postings": "postings.bin",
}
MANIFEST = "manifest.json"


class MissingSnapshot(ArchiveLensError):
    """No committed snapshot at the given directory."""


@dataclass(frozen=True)
class StoredSegment:
    kind: str  # "title" or "para"
    section_id: str
    start: int
    end: int


@dataclass(frozen=True)
class StoredDocument:
    doc_id: str
    title: str
    date: str  # ISO date or empty
    text: str
    segments: tuple[StoredSegment, ...]
    token_length: int
    persons: tuple[str, ...]
    places: tuple[str, ...]
    temporal_years: tuple[str, ...]
    mentions: tuple[tuple[str, str, int], ...]  # (kind, canonical, count)
    docbook_path: str
    ann_path: str
    off_path: str

    @property
    def year(self) -> str:
        return self.date[:4]


@dataclass(frozen=True)
class Posting:
    doc_ord: int
    tf: int
    positions: tuple[int, ...]


def _write_doc(buf: BinaryIO, doc: StoredDocument) -> None:
    codec.write_str(buf, doc.doc_id)
    codec.write_str(buf, doc.title)
    codec.write_str(buf, doc.date)
    codec.write_str(buf, doc.text)
    codec.write_u32(buf, len(doc.segments))
    for seg in doc.segments:
        codec.write_str(buf, seg.kind)
        codec.write_str(buf, seg.section_id)
        codec.write_u32(buf, seg.start)
        codec.write_u32(buf, seg.end)
    codec.write_u32(buf, doc.token_length)
    codec.write_str(buf, doc.docbook_path)
    codec.write_str(buf, doc.ann_path)
    codec.write_str(buf, doc.off_path)


def _read_doc(buf: BinaryIO) -> dict:
    doc_id = codec.read_str(buf)
    title = codec.read_str(buf)
    date = codec.read_str(buf)
    text = codec.read_str(buf)
    segments = tuple(
        StoredSegment(
            codec.read_str(buf), codec.read_str(buf), codec.read_u32(buf), codec.read_u32(buf)
        )
        for _ in range(codec.read_u32(buf))
    )
    return {
        "doc_id": doc_id,
        "title": title,
        "date": date,
        "text": text,
        "segments": segments,
        "token_length": codec.read_u32(buf),
        "docbook_path": codec.read_str(buf),
        "ann_path": codec.read_str(buf),
        "off_path": codec.read_str(buf),
    }


def _write_str_list(buf: BinaryIO, values: Sequence[str]) -> None:
    codec.write_u32(buf, len(values))
    for v in values:
        codec.write_str(buf, v)


def _read_str_list(buf: BinaryIO) -> tuple[str, ...]:
    return tuple(codec.read_str(buf) for _ in range(codec.read_u32(buf)))


@dataclass
class IndexSnapshot:
    path: Path
    documents: list[StoredDocument]
    postings: dict[str, tuple[Posting, ...]]
    created: str
    checksums: dict[str, str]

    @property
    def doc_count(self) -> int:
        return len(self.documents)

    @property
    def total_token_length(self) -> int:
        return sum(d.token_length for d in self.documents)

    @property
    def avgdl(self) -> float:
        return self.total_token_length / self.doc_count if self.documents else 0.0

    @classmethod
    def write(
        cls,
        directory: Path | str,
        documents: Sequence[StoredDocument],
        postings: Mapping[str, Sequence[Posting]],
    ) -> "IndexSnapshot":
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)

        docs_buf = io.BytesIO()
        codec.write_header(docs_buf, "documents")
        codec.write_u32(docs_buf, len(documents))
        for doc in documents:
            _write_doc(docs_buf, doc)

        facets_buf = io.BytesIO()
        codec.write_header(facets_buf, "facets")
        codec.write_u32(facets_buf, len(documents))
        for doc in documents:
            _write_str_list(facets_buf, doc.persons)
            _write_str_list(facets_buf, doc.places)
            _write_str_list(facets_buf, doc.temporal_years)
            codec.write_u32(facets_buf, len(doc.mentions))
            for kind, name, count in doc.mentions:
                codec.write_str(facets_buf, kind)
                codec.write_str(facets_buf, name)
                codec.write_u32(facets_buf, count)

        post_buf = io.BytesIO()
        codec.write_header(post_buf, "postings")
        locations: list[tuple[str, int, int]] = []
        for term in sorted(postings):
            start = post_buf.tell()
            plist = postings[term]
            codec.write_u32(post_buf, len(plist))
            for p in plist:
                codec.write_u32(post_buf, p.doc_ord)
                codec.write_u32(post_buf, p.tf)
                codec.write_u32_list(post_buf, p.positions)
            locations.append((term, start, post_buf.tell() - start))

        terms_buf = io.BytesIO()
        codec.write_header(terms_buf, "terms")
        codec.write_u32(terms_buf, len(locations))
        for term, offset, length in locations:
            codec.write_str(terms_buf, term)
            codec.write_u32(terms_buf, len(postings[term]))
            codec.write_u64(terms_buf, offset)
            codec.write_u64(terms_buf, length)

        blobs = {
            "documents": docs_buf.getvalue(),
            "facets": facets_buf.getvalue(),
            "terms": terms_buf.getvalue(),
            "postings": post_buf.getvalue(),
        }
        checksums = {}
        for section, blob in blobs.items():
            _atomic_write(directory / FILES[section], blob)
            checksums[FILES[section]] = hashlib.sha256(blob).hexdigest()

        created = datetime.now(timezone.utc).isoformat(timespec="seconds")
        manifest = {
            "format": codec.MAGIC.decode("ascii"),
            "version": codec.FORMAT_VERSION,
            "created": created,
            "doc_count": len(documents),
            "term_count": len(postings),
            "total_token_length": sum(d.token_length for d in documents),
            "avgdl": (sum(d.token_length for d in documents) / len(documents)) if documents else 0.0,
            "files": dict(FILES),
            "sha256": checksums,
        }
        _atomic_write(
            directory / MANIFEST,
            (json.dumps(manifest, indent=2, sort_keys=True) + "\n").encode("utf-8"),
        )
        return cls(
            path=directory,
            documents=list(documents),
            postings={t: tuple(p) for t, p in postings.items()},
            created=created,
            checksums=checksums,
        )

    @classmethod
    def open(cls, directory: Path | str, verify: bool = True) -> "IndexSnapshot":
        directory = Path(directory)
        manifest_path = directory / MANIFEST
        if not manifest_path.is_file():
            raise MissingSnapshot(f"no committed snapshot at {directory}")
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise CorruptSnapshot(f"unreadable manifest: {exc}") from exc
        if manifest.get("format") != codec.MAGIC.decode("ascii"):
            raise CorruptSnapshot(f"unknown snapshot format {manifest.get('format')!r}")
        if manifest.get("version") != codec.FORMAT_VERSION:
            raise CorruptSnapshot(f"unsupported snapshot version {manifest.get('version')!r}")

        blobs = {}
        for section, name in FILES.items():
            path = directory / name
            if not path.is_file():
                raise CorruptSnapshot(f"missing segment file {name}")
            blob = path.read_bytes()
            if verify:
                digest = hashlib.sha256(blob).hexdigest()
                expected = manifest.get("sha256", {}).get(name)
                if digest != expected:
                    raise CorruptSnapshot(f"checksum mismatch for {name}")
            blobs[section] = blob

        docs_buf = io.BytesIO(blobs["documents"])
        codec.read_header(docs_buf, "documents")
        doc_count = codec.read_u32(docs_buf)
        raw_docs = [_read_doc(docs_buf) for _ in range(doc_count)]

        facets_buf = io.BytesIO(blobs["facets"])
        codec.read_header(facets_buf, "facets")
        if codec.read_u32(facets_buf) != doc_count:
            raise CorruptSnapshot("facets/documents count mismatch")
        documents = []
        for raw in raw_docs:
            persons = _read_str_list(facets_buf)
            places = _read_str_list(facets_buf)
            years = _read_str_list(facets_buf)
            mentions = tuple(
                (codec.read_str(facets_buf), codec.read_str(facets_buf), codec.read_u32(facets_buf))
                for _ in range(codec.read_u32(facets_buf))
            )
            documents.append(StoredDocument(
                persons=persons, places=places, temporal_years=years, mentions=mentions, **raw,
            ))

        terms_buf = io.BytesIO(blobs["terms"])
        codec.read_header(terms_buf, "terms")
        term_count = codec.read_u32(terms_buf)
        post_buf = io.BytesIO(blobs["postings"])
        codec.read_header(post_buf, "postings")
        postings: dict[str, tuple[Posting, ...]] = {}
        for _ in range(term_count):
            term = codec.read_str(terms_buf)
            df = codec.read_u32(terms_buf)
            offset = codec.read_u64(terms_buf)
            codec.read_u64(terms_buf)  # byte length, unused on eager load
            post_buf.seek(offset)
            listed = codec.read_u32(post_buf)
            if listed != df:
                raise CorruptSnapshot(f"df mismatch for {term!r}")
            postings[term] = tuple(
                Posting(
                    doc_ord=codec.read_u32(post_buf),
                    tf=codec.read_u32(post_buf),
                    positions=codec.read_u32_list(post_buf),
                )
                for _ in range(listed)
            )

        if manifest.get("doc_count") != doc_count or manifest.get("term_count") != term_count:
            raise CorruptSnapshot("manifest counts disagree with segment files")
        return cls(
            path=directory,
            documents=documents,
            postings=postings,
            created=manifest.get("created", ""),
            checksums=manifest.get("sha256", {}),
        )


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
