"""Pipeline stages behind the CLI commands.

ingest: ALTO pages to per-document bundles; index: bundles to snapshot;
stats: corpus inventory without writing anything; all: both stages.
Every run produces a RunReport, serialized to report.json in the output
directory.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from .alto import BatchEntry, BBox, TextLine, TokenSpan, load_manifest, parse_alto, validate_page
from .annotate import Gazetteer
from .config import PipelineConfig
from .document import EmittedBundle, StructuredDocument, assemble_document, write_bundle
from .errors import ArchiveLensError
from .index.build import BundleRef, build_index
from .language import LanguageProfile, load_profiles
from .layout import Label
from .normalize import Lexicon, SourceLine, normalize_lines

TOTAL_KEYS = ("collections", "publications", "pages", "lines", "words")


@dataclass
class StageReport:
    name: str
    elapsed_s: float = 0.0
    counters: dict[str, int] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


@dataclass
class RunReport:
    command: str
    created: str = ""
    stages: list[StageReport] = field(default_factory=list)
    documents: list[dict] = field(default_factory=list)
    totals: dict[str, int] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.created:
            self.created = datetime.now(timezone.utc).isoformat(timespec="seconds")

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_payload(self) -> dict:
        return {
            "command": self.command,
            "created": self.created,
            "totals": dict(self.totals),
            "stages": [
                {
                    "name": s.name,
                    "elapsed_s": round(s.elapsed_s, 6),
                    "counters": dict(s.counters),
                    "warnings": list(s.warnings),
                }
                for s in self.stages
            ],
            "documents": list(self.documents),
            "errors": list(self.errors),
        }

    def write(self, path: Path | str) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(
            json.dumps(self.to_payload(), ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
        )


def _load_resources(config: PipelineConfig) -> tuple[Lexicon, list[LanguageProfile], list[Gazetteer]]:
    lexicon = Lexicon.from_tsv(config.lexicon)
    profiles = load_profiles(config.profiles) if config.profiles else []
    gazetteers = [Gazetteer.from_json(p) for p in config.gazetteers]
    return lexicon, profiles, gazetteers


def _parse_entry(entry: BatchEntry) -> tuple[list, int, int]:
    """Parse all pages of one manifest entry; returns (pages, lines, words)."""
    pages = []
    lines = 0
    words = 0
    for number, file in enumerate(entry.files, start=1):
        page = parse_alto(Path(file).read_bytes(), entry.meta, page_number=number)
        for diag in validate_page(page):
            page.warnings.append(f"{diag.code} at {diag.where}: {diag.message}")
        pages.append(page)
        for block in page.blocks:
            lines += len(block.lines)
            words += sum(len(line.tokens) for line in block.lines)
    return pages, lines, words


def _document_record(
    entry: BatchEntry,
    doc: StructuredDocument,
    bundle: EmittedBundle,
    lines: int,
    words: int,
) -> dict:
    labels = {label.value: 0 for label in Label}
    for block in doc.blocks:
        labels[block.label.value] += 1
    kinds = {"person": 0, "place": 0, "temporal": 0}
    for ann in doc.annotations:
        kinds[ann.kind.value] += 1
    return {
        "doc_id": doc.doc_id,
        "collection_id": entry.meta.collection_id,
        "title": entry.meta.title,
        "date": doc.publication_date.isoformat() if doc.publication_date else None,
        "language": doc.language,
        "language_confidence": doc.language_confidence,
        "pages": doc.page_count,
        "lines": lines,
        "words": words,
        "tokens_in": doc.stats.tokens_in,
        "tokens_kept": doc.stats.tokens_kept,
        "tokens_removed": doc.stats.tokens_removed,
        "dehyphenated": doc.stats.dehyphenated,
        "squeezed": doc.stats.squeezed,
        "spell_corrected": doc.stats.spell_corrected,
        "unknown": doc.stats.unknown,
        "blocks": labels,
        "annotations": kinds,
        "sections": len(doc.sections),
        "sentences": len(doc.sentences),
        "warnings": len(doc.warnings),
        "files": {
            "docbook": str(bundle.docbook_path),
            "ann": str(bundle.ann_path),
            "off": str(bundle.off_path),
        },
    }


def run_ingest(config: PipelineConfig, report: Optional[RunReport] = None) -> RunReport:
    report = report or RunReport(command="ingest")
    stage = StageReport(name="ingest")
    started = time.perf_counter()

    lexicon, profiles, gazetteers = _load_resources(config)
    entries = load_manifest(config.manifest)

    def process(entry: BatchEntry):
        pages, lines, words = _parse_entry(entry)
        doc = assemble_document(
            entry.meta,
            pages,
            lexicon=lexicon,
            profiles=profiles,
            gazetteers=gazetteers,
            layout_config=config.layout,
        )
        bundle = write_bundle(doc, config.output_dir)
        return doc, bundle, lines, words

    results: list = [None] * len(entries)
    if entries:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            futures = {i: pool.submit(process, entry) for i, entry in enumerate(entries)}
        for i, future in futures.items():
            try:
                results[i] = future.result()
            except ArchiveLensError as exc:
                report.errors.append(f"{entries[i].meta.collection_id}: {exc}")

    totals = dict.fromkeys(TOTAL_KEYS, 0)
    counters = stage.counters
    collections = set()
    for entry, result in zip(entries, results):
        if result is None:
            continue
        doc, bundle, lines, words = result
        record = _document_record(entry, doc, bundle, lines, words)
        report.documents.append(record)
        collections.add(entry.meta.collection_id)
        totals["publications"] += 1
        totals["pages"] += doc.page_count
        totals["lines"] += lines
        totals["words"] += words
        for key in (
            "tokens_in", "tokens_kept", "tokens_removed",
            "dehyphenated", "squeezed", "spell_corrected", "unknown",
            "sections", "sentences",
        ):
            counters[key] = counters.get(key, 0) + record[key]
        for label, count in record["blocks"].items():
            counters[f"blocks_{label}"] = counters.get(f"blocks_{label}", 0) + count
        for kind, count in record["annotations"].items():
            counters[f"annotations_{kind}"] = counters.get(f"annotations_{kind}", 0) + count
        stage.warnings.extend(doc.warnings)
    totals["collections"] = len(collections)
    counters["documents"] = totals["publications"]
    counters["pages"] = totals["pages"]

    report.totals = totals
    stage.elapsed_s = time.perf_counter() - started
    report.stages.append(stage)
    return report


def discover_bundles(output_dir: Path | str) -> list[BundleRef]:
    """Bundle triples found on disk, ordered by doc_id."""
    output_dir = Path(output_dir)
    refs = []
    for docbook in sorted(output_dir.glob("*.docbook.xml")):
        doc_id = docbook.name[:-len(".docbook.xml")]
        refs.append(BundleRef(
            doc_id=doc_id,
            docbook_path=docbook,
            ann_path=output_dir / f"{doc_id}.ann.json",
            off_path=output_dir / f"{doc_id}.off.json",
        ))
    return refs


def run_index(config: PipelineConfig, report: Optional[RunReport] = None) -> RunReport:
    report = report or RunReport(command="index")
    stage = StageReport(name="index")
    started = time.perf_counter()
    try:
        refs = discover_bundles(config.output_dir)
        snapshot = build_index(refs, config.index_dir)
        stage.counters = {
            "documents_indexed": snapshot.doc_count,
            "terms": len(snapshot.postings),
            "total_token_length": snapshot.total_token_length,
        }
    except ArchiveLensError as exc:
        report.errors.append(f"index: {exc}")
    stage.elapsed_s = time.perf_counter() - started
    report.stages.append(stage)
    return report


def run_stats(config: PipelineConfig) -> RunReport:
    """Corpus inventory from the ALTO sources alone; writes nothing."""
    report = RunReport(command="stats")
    stage = StageReport(name="stats")
    started = time.perf_counter()
    totals = dict.fromkeys(TOTAL_KEYS, 0)
    collections = set()
    for entry in load_manifest(config.manifest):
        try:
            pages, lines, words = _parse_entry(entry)
        except ArchiveLensError as exc:
            report.errors.append(f"{entry.meta.collection_id}: {exc}")
            continue
        collections.add(entry.meta.collection_id)
        totals["publications"] += 1
        totals["pages"] += len(pages)
        totals["lines"] += lines
        totals["words"] += words
    totals["collections"] = len(collections)
    report.totals = totals
    stage.elapsed_s = time.perf_counter() - started
    report.stages.append(stage)
    return report


def run_all(config: PipelineConfig) -> RunReport:
    report = RunReport(command="all")
    run_ingest(config, report)
    if not report.errors:
        run_index(config, report)
    return report


def synthesize_lines(lexicon: Lexicon, n_lines: int, seed: int = 0) -> list[SourceLine]:
    """Deterministic ALTO-like lines for the throughput benchmark: mostly
    lexicon words, with hyphen splits, squeezable runs and OCR garbage.
    """
    rng = random.Random(seed)
    vocab = sorted(lexicon)[:4000] or ["page"]
    lines: list[SourceLine] = []
    pending: Optional[str] = None
    for i in range(n_lines):
        words = []
        if pending is not None:
            words.append(pending)
            pending = None
        while len(words) < 7:
            word = rng.choice(vocab)
            roll = rng.random()
            if roll < 0.02 and len(word) > 2:
                word = word[0] * 3 + word[1:]  # squeezable run
            elif roll < 0.04:
                word = "%%"  # garbage
            words.append(word)
        trailing = False
        if rng.random() < 0.05:
            tail = words[-1]
            if len(tail) > 3:
                cut = len(tail) // 2
                words[-1] = tail[:cut] + "-"
                pending = tail[cut:]
                trailing = True
        tokens = tuple(
            TokenSpan(content=w, bbox=BBox(10 + 40 * j, 10 + 12 * i, 38, 10))
            for j, w in enumerate(words)
        )
        lines.append(SourceLine(
            page_id=f"B{i // 400}",
            block_id=f"B{i // 400}_TB{i // 40}",
            line=TextLine(line_id=f"L{i}", bbox=None, tokens=tokens, trailing_hyphen=trailing),
        ))
    return lines


def run_benchmark(config: PipelineConfig, n_lines: int = 20000, seed: int = 0) -> dict:
    lexicon = Lexicon.from_tsv(config.lexicon)
    lines = synthesize_lines(lexicon, n_lines, seed)
    started = time.perf_counter()
    tokens, stats = normalize_lines(lines, lexicon)
    elapsed = time.perf_counter() - started
    return {
        "lines": n_lines,
        "tokens": stats.tokens_in,
        "elapsed_s": round(elapsed, 4),
        "lines_per_second": round(n_lines / elapsed, 1) if elapsed > 0 else float("inf"),
        "tokens_kept": stats.tokens_kept,
        "tokens_removed": stats.tokens_removed,
        "dehyphenated": stats.dehyphenated,
    }
