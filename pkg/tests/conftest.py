from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path
from typing import NamedTuple

import pytest

from archive_lens.alto import AltoPage, CollectionMeta, load_manifest, parse_alto
from archive_lens.annotate import Gazetteer
from archive_lens.config import PipelineConfig, load_config
from archive_lens.document import StructuredDocument, assemble_document
from archive_lens.index import IndexSnapshot, SearchEngine
from archive_lens.language import load_profiles
from archive_lens.normalize import Lexicon
from archive_lens.pipeline import RunReport, run_all

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
NS_V4 = "http://www.loc.gov/standards/alto/ns-v4#"


def write_config(tmp: Path, **overrides) -> Path:
    """A TOML config pointing at the bundled fixtures, outputs under tmp."""
    values = {
        "manifest": FIXTURES / "manifest.json",
        "lexicon": FIXTURES / "resources" / "lexicon.tsv",
        "output_dir": tmp / "bundles",
        "index_dir": tmp / "index",
    }
    values.update(overrides)
    gaz = [FIXTURES / "resources" / "gazetteer_person.json",
           FIXTURES / "resources" / "gazetteer_place.json"]
    profiles = [FIXTURES / "resources" / "profiles" / f"{lang}.json" for lang in ("fr", "en", "de")]
    text = "\n".join([
        "[paths]",
        f'manifest = "{values["manifest"]}"',
        f'lexicon = "{values["lexicon"]}"',
        "gazetteers = [" + ", ".join(f'"{p}"' for p in gaz) + "]",
        "profiles = [" + ", ".join(f'"{p}"' for p in profiles) + "]",
        f'output_dir = "{values["output_dir"]}"',
        f'index_dir = "{values["index_dir"]}"',
        "",
        "[service]",
        "port = 8123",
        "",
        "[pipeline]",
        "jobs = 2",
    ]) + "\n"
    path = tmp / "config.toml"
    path.write_text(text, encoding="utf-8")
    return path


class Corpus(NamedTuple):
    config: PipelineConfig
    report: RunReport
    bundles: Path
    index: Path


@pytest.fixture(scope="session")
def corpus(tmp_path_factory) -> Corpus:
    """The fixture collections ingested and indexed once per session."""
    tmp = tmp_path_factory.mktemp("corpus")
    config = load_config(write_config(tmp))
    report = run_all(config)
    assert not report.errors, report.errors
    return Corpus(config, report, config.output_dir, config.index_dir)


@pytest.fixture(scope="session")
def engine(corpus: Corpus) -> SearchEngine:
    return SearchEngine(IndexSnapshot.open(corpus.index))


@pytest.fixture(scope="session")
def lexicon() -> Lexicon:
    return Lexicon.from_tsv(FIXTURES / "resources" / "lexicon.tsv")


@pytest.fixture(scope="session")
def gazetteers() -> list[Gazetteer]:
    return [
        Gazetteer.from_json(FIXTURES / "resources" / "gazetteer_person.json"),
        Gazetteer.from_json(FIXTURES / "resources" / "gazetteer_place.json"),
    ]


@pytest.fixture(scope="session")
def fixture_pages() -> dict[str, list[AltoPage]]:
    pages: dict[str, list[AltoPage]] = {}
    for entry in load_manifest(FIXTURES / "manifest.json"):
        pages[entry.meta.collection_id] = [
            parse_alto(path.read_bytes(), entry.meta, number)
            for number, path in enumerate(entry.files, 1)
        ]
    return pages


@pytest.fixture(scope="session")
def assembled(fixture_pages, lexicon, gazetteers) -> dict[str, StructuredDocument]:
    profiles = load_profiles([
        FIXTURES / "resources" / "profiles" / f"{lang}.json" for lang in ("fr", "en", "de")
    ])
    docs = {}
    for entry in load_manifest(FIXTURES / "manifest.json"):
        cid = entry.meta.collection_id
        docs[cid] = assemble_document(
            entry.meta,
            fixture_pages[cid],
            lexicon=lexicon,
            profiles=profiles,
            gazetteers=gazetteers,
        )
    return docs


def build_alto(
    blocks: list[dict],
    ns: str = NS_V4,
    page_id: str = "p1",
    width: int = 2400,
    height: int = 3600,
    styles: tuple[tuple[str, float], ...] = (("TS_BODY", 11.0),),
) -> bytes:
    """Small synthetic ALTO page. Each block dict: lines (list of word
    lists), optional style, y, line_height, hyp (line index getting a
    trailing HYP mark).
    """
    ET.register_namespace("", ns)

    def q(tag: str) -> str:
        return f"{{{ns}}}{tag}"

    alto = ET.Element(q("alto"))
    styles_el = ET.SubElement(alto, q("Styles"))
    for style_id, size in styles:
        ET.SubElement(styles_el, q("TextStyle"), {"ID": style_id, "FONTSIZE": str(size)})
    layout = ET.SubElement(alto, q("Layout"))
    page = ET.SubElement(layout, q("Page"), {
        "ID": page_id, "WIDTH": str(width), "HEIGHT": str(height), "PHYSICAL_IMG_NR": "1",
    })
    space = ET.SubElement(page, q("PrintSpace"), {
        "HPOS": "0", "VPOS": "0", "WIDTH": str(width), "HEIGHT": str(height),
    })
    y_default = 400
    for b_idx, block in enumerate(blocks):
        y = block.get("y", y_default + 200 * b_idx)
        line_h = block.get("line_height", 26)
        attrs = {
            "ID": block.get("id", f"{page_id}_b{b_idx:02d}"),
            "HPOS": "100", "VPOS": str(y),
            "WIDTH": str(width - 200), "HEIGHT": str(line_h * len(block["lines"])),
        }
        if "style" in block:
            attrs["STYLEREFS"] = block["style"]
        tb = ET.SubElement(space, q("TextBlock"), attrs)
        for l_idx, words in enumerate(block["lines"]):
            line = ET.SubElement(tb, q("TextLine"), {
                "ID": f"{attrs['ID']}_l{l_idx}",
                "HPOS": "100", "VPOS": str(y + l_idx * line_h),
                "WIDTH": str(width - 200), "HEIGHT": str(line_h - 4),
            })
            x = 100
            for w_idx, word in enumerate(words):
                w = 20 + 15 * len(word)
                ET.SubElement(line, q("String"), {
                    "CONTENT": word,
                    "HPOS": str(x), "VPOS": str(y + l_idx * line_h),
                    "WIDTH": str(w), "HEIGHT": str(line_h - 6),
                })
                x += w + 12
            if block.get("hyp") == l_idx:
                ET.SubElement(line, q("HYP"), {"CONTENT": "-"})
    return ET.tostring(alto, encoding="UTF-8", xml_declaration=True)


def parse_blocks(blocks: list[dict], collection_id: str = "c1", **kw) -> AltoPage:
    meta = CollectionMeta(collection_id=collection_id, title="T")
    return parse_alto(build_alto(blocks, **kw), meta)
