#!/usr/bin/env python3
"""Regenerate the bundled fixture corpus.

Three single-issue collections, three ALTO pages each (one collection in
the v2 namespace, two in v4), with exact known totals: 9 pages, 360
lines, 2400 words. The text plants one squeeze case, one spelling error
and two garbage tokens per document, plus gazetteer entities, honorific
names and datable expressions. Deterministic: fixed seeds, no wall clock.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from archive_lens.language import build_profile, save_profile
from archive_lens.normalize import edit_distance

PAGE_W, PAGE_H = 2400, 3600
NS_V4 = "http://www.loc.gov/standards/alto/ns-v4#"
NS_V2 = "http://www.loc.gov/standards/alto/ns-v2#"

# word -> frequency; every non-entity word the fixtures use must be here,
# and nothing may sit at edit distance 1 of an entity surname.
LEXICON = {
    "le": 95, "la": 94, "les": 90, "un": 80, "une": 78, "de": 99, "du": 85,
    "des": 84, "et": 88, "en": 82, "sur": 70, "pour": 69, "par": 65,
    "avec": 62, "dans": 72, "au": 75, "aux": 60, "il": 77, "elle": 66,
    "a": 71, "ont": 58, "est": 76, "sont": 59, "fut": 40, "sera": 38,
    "aura": 30, "avait": 45, "ce": 63, "cette": 55, "son": 57, "sa": 56,
    "ses": 50, "leur": 48, "plus": 52, "sans": 36, "sous": 35,
    "conseil": 44, "municipal": 33, "municipale": 22, "séance": 41,
    "tenu": 26, "ouvert": 24, "ouverte": 21, "rapport": 39, "annuel": 18,
    "comité": 28, "foule": 25, "attendait": 14, "place": 47, "grande": 43,
    "grands": 27, "ouvriers": 34, "travail": 46, "repris": 15, "maire": 42,
    "viendra": 13, "incendie": 17, "détruit": 12, "grange": 10,
    "marché": 31, "lieu": 29, "soir": 32, "habitants": 23, "devant": 37,
    "prix": 20, "jury": 9, "reçu": 16, "présenté": 19, "dit": 49,
    "enfants": 51, "réunion": 11, "duré": 8, "deux": 53, "heures": 54,
    "train": 61, "arrive": 7, "gare": 6, "habite": 5, "voisine": 4,
    "depuis": 64, "ville": 52, "villes": 9, "bonjour": 40, "document": 61,
    "documents": 22, "pont": 30, "neuf": 21, "travaux": 33,
    "nouvelles": 26, "journal": 35, "numéro": 14, "page": 27,
    "article": 25, "lettre": 19, "temps": 44, "hiver": 13, "pluie": 12,
    "vent": 11, "route": 24, "chemin": 23, "église": 18, "école": 29,
    "mairie": 17, "fête": 22, "musique": 16, "concert": 15, "salle": 28,
    "porte": 31, "jardin": 20, "champ": 10, "forêt": 9, "rivière": 8,
    "moulin": 7, "usine": 32, "atelier": 12, "patron": 14, "grève": 36,
    "salaire": 13, "francs": 25, "région": 18, "histoire": 17,
    "semaine": 30, "matin": 33, "midi": 10, "nuit": 21, "année": 38,
    "mois": 34, "jour": 45, "jours": 35, "nouvelle": 24, "longue": 8,
    "publique": 11, "publiques": 5, "sapeurs": 4, "pompiers": 6,
    "secours": 9, "rue": 39, "quartier": 16, "voie": 7, "ligne": 15,
    "campagne": 13, "récolte": 6, "blé": 5, "vigne": 4, "vendange": 3,
    "janvier": 12, "février": 10, "mars": 30, "avril": 28, "mai": 26,
    "juin": 24, "juillet": 22, "août": 20, "septembre": 18, "octobre": 16,
    "novembre": 14, "décembre": 12, "lundi": 15, "mardi": 14,
    "mercredi": 16, "jeudi": 13, "vendredi": 15, "samedi": 17,
    "dimanche": 19, "hier": 27, "demain": 23, "aujourd'hui": 29,
    "sentinelle": 6, "écho": 5, "doubs": 7, "progrès": 8, "comtois": 4,
    "y": 31, "à": 87, "ô": 2,
}

TITLES = [
    ["Les", "grands", "travaux", "du", "pont", "neuf"],
    ["Nouvelles", "de", "la", "grande", "région", "voisine"],
    ["La", "fête", "de", "la", "musique", "publique"],
    ["Le", "grand", "marché", "de", "la", "gare"],
    ["Une", "longue", "nuit", "sans", "pluie", "forte"],
    ["Les", "ouvriers", "et", "le", "travail", "repris"],
    ["La", "récolte", "du", "blé", "cette", "année"],
    ["Le", "concert", "de", "la", "salle", "neuve"],
    ["Histoire", "de", "la", "vieille", "église", "grise"],
    ["Le", "train", "du", "matin", "en", "gare"],
]
# title words not in the base bank
LEXICON.update({"forte": 5, "vieille": 6, "grise": 3, "neuve": 7, "grand": 12})

SENTENCES = [
    "Le conseil municipal a tenu séance {soir} soir .".split(),
    "M. Durand a ouvert la séance devant les habitants .".split(),
    "Jean Dupont a présenté le rapport annuel du comité .".split(),
    "La foule attendait sur la grande place de Besançon .".split(),
    "Les ouvriers de Montbéliard ont repris le travail .".split(),
    "Mme Berthe Morin a reçu le prix du jury .".split(),
    "Albert Peugeot habite la rue de la gare .".split(),
    "Le train du matin arrive en gare sans retard .".split(),
    "La pluie a duré deux heures ce matin .".split(),
    "Une lettre du maire sera lue dimanche à la mairie .".split(),
    "Les enfants de l' école ont chanté devant la porte .".split(),
    "Le patron de l' usine a promis un salaire neuf .".split(),
    "La grève des ouvriers a duré une semaine entière .".split(),
    "Le jardin de la mairie sera ouvert au public .".split(),
    "Un incendie a détruit la grange du moulin .".split(),
    "Les sapeurs pompiers ont porté secours au quartier .".split(),
    "La route de Paris est ouverte depuis ce matin .".split(),
    "Le comité a reçu une nouvelle lettre de Lyon .".split(),
    "Il a dit bonjour aux habitants du quartier .".split(),
    "Elle habite la ville voisine depuis deux mois .".split(),
]
LEXICON.update({
    "retard": 6, "lue": 4, "l'": 40, "chanté": 5, "promis": 4,
    "entière": 5, "porté": 6, "public": 13, "vieux": 5,
})

# per-document planted corrections and datable sentences
PLANTS = {
    0: [
        "La réunion du mercrediiii a duré deux heures .".split(),
        "Il a dit bonjoar aux enfants du quartier .".split(),
        "Le %% train arrive en gare ce soir .".split(),
        "Le maire viendra le 12 avril 1913 à midi .".split(),
        "Un incendie a détruit la grange en 1917 .".split(),
        "Le marché aura lieu demain sur la grande place .".split(),
    ],
    1: [
        "La réunion du mercrediiii a duré deux heures .".split(),
        "Elle habite la ville voisine depuis mars 1920 .".split(),
        "Le (( journal sera lu demain matin .".split(),
        "La séance publique du 5 mars 1920 fut longue .".split(),
        "Les ouvriers ont repris le travail hier matin .".split(),
        "Jean Dupont viendra de Paris avec le comité .".split(),
    ],
    2: [
        "La réunion du mercrediiii a duré deux heures .".split(),
        "Le documant du conseil sera présenté au public .".split(),
        "Le %% marché du soir est ouvert .".split(),
        "La fête aura lieu le 23 avril 1932 .".split(),
        "Une lettre de 1931 fut lue devant le jury .".split(),
        "M. Durand viendra demain avec Marie Curie .".split(),
    ],
}
LEXICON.update({"lu": 9, "midi": 10})

DOCS = [
    {
        "collection_id": "sentinelle-1913-04-12",
        "title": "La Sentinelle",
        "date": "1913-04-12",
        "masthead": ["LA", "SENTINELLE", "N°", "57", "12", "avril", "1913"],
        "ns": NS_V4,
    },
    {
        "collection_id": "echo-doubs-1920-03-05",
        "title": "L'Écho du Doubs",
        "date": "1920-03-05",
        "masthead": ["L'ÉCHO", "DU", "DOUBS", "N°", "112", "5", "mars", "1920"],
        "ns": NS_V4,
    },
    {
        "collection_id": "progres-comtois-1932-04-23",
        "title": "Le Progrès Comtois",
        "date": "1932-04-23",
        "masthead": ["LE", "PROGRÈS", "COMTOIS", "N°", "8", "23", "avril", "1932"],
        "ns": NS_V2,
    },
]

GAZETTEER_PERSON = {
    "kind": "person",
    "entries": {
        "Jean Dupont": ["J. Dupont", "Dupont"],
        "Marie Curie": ["Curie"],
        "Albert Peugeot": ["Peugeot"],
        "Berthe Morin": ["Morin"],
    },
}
GAZETTEER_PLACE = {
    "kind": "place",
    "entries": {
        "Besançon": [],
        "Paris": [],
        "Montbéliard": ["Montbeliard"],
        "Lyon": [],
    },
}

SAMPLE_FR = (
    "Le conseil municipal de la ville a tenu une longue séance hier soir. "
    "Les habitants du quartier attendaient devant la mairie depuis le matin. "
    "La pluie n'a pas empêché la fête de la musique sur la grande place. "
    "Les ouvriers de l'usine ont repris le travail après une semaine de grève. "
    "Le train du matin est arrivé en gare avec un léger retard. "
    "Une lettre du maire sera lue dimanche prochain devant l'église. "
    "Les enfants de l'école ont chanté pour les habitants du vieux quartier. "
    "Le marché aura lieu demain matin sur la place de la gare. "
    "La récolte du blé a été bonne cette année dans toute la région. "
    "Le journal paraît chaque semaine avec des nouvelles de la campagne."
)
SAMPLE_EN = (
    "The town council held a long meeting yesterday evening at the hall. "
    "People from the neighbourhood had been waiting since early morning. "
    "The rain did not stop the music festival on the main square. "
    "The factory workers returned to work after a week on strike. "
    "The morning train arrived at the station with a slight delay. "
    "A letter from the mayor will be read next Sunday at the church. "
    "The school children sang for the people of the old quarter. "
    "The market takes place tomorrow morning near the railway station. "
    "The wheat harvest has been good this year across the whole region. "
    "The newspaper appears every week with news from the countryside."
)
SAMPLE_DE = (
    "Der Gemeinderat hielt gestern Abend eine lange Sitzung im Rathaus ab. "
    "Die Bewohner des Viertels warteten seit dem frühen Morgen davor. "
    "Der Regen konnte das Musikfest auf dem großen Platz nicht verhindern. "
    "Die Arbeiter der Fabrik nahmen nach einer Woche Streik die Arbeit wieder auf. "
    "Der Morgenzug erreichte den Bahnhof mit leichter Verspätung. "
    "Ein Brief des Bürgermeisters wird am Sonntag vor der Kirche verlesen. "
    "Die Schulkinder sangen für die Bewohner des alten Viertels. "
    "Der Markt findet morgen früh am Bahnhofsplatz statt. "
    "Die Weizenernte war dieses Jahr in der ganzen Gegend gut. "
    "Die Zeitung erscheint jede Woche mit Nachrichten vom Land."
)

# names that can land in sentence-initial position in the generated prose,
# where the spell corrector does not grant the proper-noun exemption
INITIAL_RISK_NAMES = {"Jean", "Albert", "Durand"}


def page_layout(doc_index: int, page_index: int) -> list[tuple[str, int]]:
    """Block plan for one page as (kind, line count) pairs; 40 lines total."""
    if doc_index == 0 and page_index == 0:
        return [("H", 1), ("T", 1), ("T", 1), ("P", 4), ("P", 4), ("P", 4),
                ("T", 1), ("P", 4), ("P", 4), ("P", 4),
                ("T", 1), ("P", 4), ("P", 4), ("P", 3)]
    return [("H", 1), ("T", 1), ("P", 4), ("P", 4), ("P", 4),
            ("T", 1), ("P", 4), ("P", 4), ("P", 4),
            ("T", 1), ("P", 4), ("P", 4), ("P", 4)]


class Stream:
    """Deterministic sentence-token stream; plants appear exactly once."""

    def __init__(self, rng: random.Random, doc_index: int, soir_word: str = "hier"):
        self.rng = rng
        self.queue: list[str] = []
        self.pending = [list(s) for s in PLANTS[doc_index]]
        self.soir = soir_word

    def take(self, n: int) -> list[str]:
        while len(self.queue) < n:
            if self.pending and self.rng.random() < 0.25:
                sentence = self.pending.pop(0)
            else:
                sentence = list(self.rng.choice(SENTENCES))
            sentence = [w.format(soir=self.soir) if "{" in w else w for w in sentence]
            # glue terminal punctuation onto the previous word
            glued: list[str] = []
            for w in sentence:
                if w in (".", ",", "!", "?") and glued:
                    glued[-1] += w
                else:
                    glued.append(w)
            self.queue.extend(glued)
        out, self.queue = self.queue[:n], self.queue[n:]
        return out

    def drain_plants(self, n_lines_left: int) -> None:
        # force remaining plants out early enough to fit in the document
        if self.pending and n_lines_left < 3 * len(self.pending) + 4:
            for sentence in self.pending:
                self.queue.extend(sentence)
            self.pending = []


def build_doc_lines(doc_index: int, rng: random.Random) -> list[list[dict]]:
    """Per page: list of block dicts {kind, style, lines: [[token, ...]]}."""
    doc = DOCS[doc_index]
    layouts = [page_layout(doc_index, p) for p in range(3)]
    title_lines = sum(1 for page in layouts for kind, _ in page if kind == "T")
    para_lines = sum(n for page in layouts for kind, n in page if kind == "P")
    header_words = len(doc["masthead"]) * 3
    remainder = 800 - header_words - 6 * title_lines
    sevens = remainder - 6 * para_lines
    assert 0 <= sevens <= para_lines, (doc_index, sevens, para_lines)
    weights = [7] * sevens + [6] * (para_lines - sevens)
    rng.shuffle(weights)

    stream = Stream(rng, doc_index)
    titles = list(TITLES)
    rng.shuffle(titles)
    title_cycle = iter(titles * 3)

    hyphen_budget = 4
    pages: list[list[dict]] = []
    w = 0
    lines_done = 0
    for layout in layouts:
        blocks: list[dict] = []
        for kind, n_lines in layout:
            if kind == "H":
                blocks.append({"kind": "H", "style": "TS_BODY", "lines": [list(doc["masthead"])]})
                continue
            if kind == "T":
                blocks.append({"kind": "T", "style": "TS_TITLE", "lines": [list(next(title_cycle))]})
                lines_done += 1
                continue
            lines: list[list[str]] = []
            hyp_line = None
            pending_half = None
            for k in range(n_lines):
                stream.drain_plants(para_lines - lines_done)
                want = weights[w]
                w += 1
                lines_done += 1
                if pending_half is not None:
                    # second half of a split word opens the line; take one
                    # fewer word so the String count per line stays planned
                    row = [pending_half] + stream.take(want - 1)
                    pending_half = None
                else:
                    row = stream.take(want)
                    if hyphen_budget > 0 and hyp_line is None and k < n_lines - 1:
                        tail = row[-1]
                        if tail in LEXICON and tail.isalpha() and len(tail) >= 6:
                            cut = len(tail) // 2
                            row[-1] = tail[:cut] + "-"
                            pending_half = tail[cut:]
                            hyp_line = k
                            hyphen_budget -= 1
                lines.append(row)
            entry = {"kind": "P", "style": "TS_BODY", "lines": lines}
            if hyp_line is not None:
                entry["hyp"] = hyp_line
            blocks.append(entry)
        pages.append(blocks)
    return pages


def write_alto(path: Path, ns: str, page_id: str, page_number: int, blocks: list[dict]) -> int:
    """Serialize one page; returns the number of String elements."""
    ET.register_namespace("", ns)

    def q(tag: str) -> str:
        return f"{{{ns}}}{tag}"

    alto = ET.Element(q("alto"))
    desc = ET.SubElement(alto, q("Description"))
    ET.SubElement(desc, q("MeasurementUnit")).text = "pixel"
    styles = ET.SubElement(alto, q("Styles"))
    ET.SubElement(styles, q("TextStyle"), {"ID": "TS_BODY", "FONTSIZE": "11"})
    ET.SubElement(styles, q("TextStyle"), {"ID": "TS_TITLE", "FONTSIZE": "16"})
    layout = ET.Element(q("Layout"))
    alto.append(layout)
    page = ET.SubElement(layout, q("Page"), {
        "ID": page_id, "PHYSICAL_IMG_NR": str(page_number),
        "WIDTH": str(PAGE_W), "HEIGHT": str(PAGE_H),
    })
    print_space = ET.SubElement(page, q("PrintSpace"), {
        "HPOS": "0", "VPOS": "0", "WIDTH": str(PAGE_W), "HEIGHT": str(PAGE_H),
    })

    words = 0
    y = 400
    line_no = 0
    for b_idx, block in enumerate(blocks):
        if block["kind"] == "H":
            block_y, line_h = 40, 40
        else:
            block_y, line_h = y, 26
        n_lines = len(block["lines"])
        attrs = {
            "ID": f"{page_id}_b{b_idx:02d}",
            "STYLEREFS": block["style"],
            "HPOS": "150", "VPOS": str(block_y),
            "WIDTH": "2100", "HEIGHT": str(line_h * n_lines),
        }
        parent = print_space
        if block.get("composed"):
            parent = ET.SubElement(print_space, q("ComposedBlock"), {
                "ID": f"{page_id}_cb{b_idx:02d}",
                "HPOS": "150", "VPOS": str(block_y),
                "WIDTH": "2100", "HEIGHT": str(line_h * n_lines),
            })
        tb = ET.SubElement(parent, q("TextBlock"), attrs)
        for l_idx, tokens in enumerate(block["lines"]):
            line_y = block_y + l_idx * line_h
            line = ET.SubElement(tb, q("TextLine"), {
                "ID": f"{page_id}_l{line_no:03d}",
                "HPOS": "150", "VPOS": str(line_y),
                "WIDTH": "2100", "HEIGHT": str(line_h - 4),
            })
            line_no += 1
            x = 150
            for t_idx, token in enumerate(tokens):
                width = 24 + 18 * len(token)
                ET.SubElement(line, q("String"), {
                    "CONTENT": token,
                    "HPOS": str(x), "VPOS": str(line_y),
                    "WIDTH": str(width), "HEIGHT": str(line_h - 6),
                    "WC": "0.95",
                })
                words += 1
                x += width
                if t_idx < len(tokens) - 1:
                    ET.SubElement(line, q("SP"), {"WIDTH": "14", "HPOS": str(x), "VPOS": str(line_y)})
                    x += 14
            if block.get("hyp") == l_idx:
                ET.SubElement(line, q("HYP"), {"CONTENT": "-"})
        if block["kind"] != "H":
            y = block_y + line_h * n_lines + 18

    tree = ET.ElementTree(alto)
    ET.indent(tree)
    path.write_bytes(ET.tostring(alto, encoding="UTF-8", xml_declaration=True) + b"\n")
    return words


def check_lexicon_safety() -> None:
    """No lexicon entry may sit within one edit of a name that can start a
    sentence, or the spell corrector could rewrite it in generated prose.
    """
    for name in INITIAL_RISK_NAMES:
        folded = name.casefold()
        for word in LEXICON:
            if edit_distance(folded, word) <= 1:
                raise SystemExit(f"lexicon word {word!r} is too close to name {name!r}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--root", type=Path, default=Path(__file__).resolve().parents[1] / "fixtures")
    args = parser.parse_args()
    root = args.root
    (root / "alto").mkdir(parents=True, exist_ok=True)
    (root / "resources" / "profiles").mkdir(parents=True, exist_ok=True)

    check_lexicon_safety()

    manifest = []
    total_lines = 0
    total_words = 0
    total_pages = 0
    for d_idx, doc in enumerate(DOCS):
        rng = random.Random(1000 + d_idx)
        pages = build_doc_lines(d_idx, rng)
        if d_idx == 2:
            pages[1][3]["composed"] = True  # exercise ComposedBlock nesting
        files = []
        for p_idx, blocks in enumerate(pages):
            page_id = f"p{p_idx + 1}"
            name = f"{doc['collection_id']}-p{p_idx + 1}.xml"
            words = write_alto(root / "alto" / name, doc["ns"], page_id, p_idx + 1, blocks)
            total_words += words
            total_lines += sum(len(b["lines"]) for b in blocks)
            total_pages += 1
            files.append(f"alto/{name}")
        manifest.append({
            "collection_id": doc["collection_id"],
            "title": doc["title"],
            "publication_date": doc["date"],
            "language_hint": "fr",
            "files": files,
        })

    assert total_pages == 9, total_pages
    assert total_lines == 360, total_lines
    assert total_words == 2400, total_words

    (root / "manifest.json").write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )

    lexicon_lines = ["# word<TAB>frequency"]
    for word in sorted(LEXICON):
        lexicon_lines.append(f"{word}\t{LEXICON[word]}")
    (root / "resources" / "lexicon.tsv").write_text("\n".join(lexicon_lines) + "\n", encoding="utf-8")

    for name, payload in (("gazetteer_person.json", GAZETTEER_PERSON),
                          ("gazetteer_place.json", GAZETTEER_PLACE)):
        (root / "resources" / name).write_text(
            json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )

    for lang, sample in (("fr", SAMPLE_FR), ("en", SAMPLE_EN), ("de", SAMPLE_DE)):
        profile = build_profile(sample, lang)
        save_profile(profile, root / "resources" / "profiles" / f"{lang}.json")

    (root / "config.toml").write_text(
        "\n".join([
            "# Example pipeline configuration over the bundled fixtures.",
            "",
            "[paths]",
            'manifest = "manifest.json"',
            'lexicon = "resources/lexicon.tsv"',
            'gazetteers = ["resources/gazetteer_person.json", "resources/gazetteer_place.json"]',
            'profiles = ["resources/profiles/fr.json", "resources/profiles/en.json", "resources/profiles/de.json"]',
            'output_dir = "out/bundles"',
            'index_dir = "out/index"',
            "",
            "[layout]",
            "header_band = 0.08",
            "header_recurrence = 0.5",
            "title_font_ratio = 1.3",
            "title_max_tokens = 10",
            "",
            "[service]",
            'host = "127.0.0.1"',
            "port = 8765",
            'cors_origins = ["*"]',
            "max_page_size = 100",
            "",
            "[pipeline]",
            "jobs = 1",
        ]) + "\n",
        encoding="utf-8",
    )
    print(f"fixtures written to {root}: {total_pages} pages, {total_lines} lines, {total_words} words")


if __name__ == "__main__":
    main()
