import pytest

from archive_lens.normalize import (
    Correction,
    Lexicon,
    dehyphenate,
    edit_distance,
    iter_source_lines,
    normalize_lines,
    spell_correct,
    squeeze_repeats,
    strip_garbage,
)

from conftest import parse_blocks


@pytest.fixture(scope="module")
def lex():
    return Lexicon({
        "mercredi": 16, "bonjour": 40, "ville": 52, "villes": 9,
        "document": 61, "le": 95, "la": 94, "maire": 42, "gare": 6,
    })


@pytest.mark.parametrize("token,kept", [
    ("y", True), ("a", True), ("à", True), ("ô", True),
    ("5", True), ("1913", True), ("mot", True), ("N°", True),
    ("b", False), ("z", False), ("%%", False), ("((", False),
    ("...", False), ("-", False), ("__", False),
])
def test_strip_garbage(token, kept):
    assert strip_garbage(token) is kept


@pytest.mark.parametrize("a,b,d", [
    ("", "", 0), ("a", "", 1), ("", "abc", 3), ("chat", "chat", 0),
    ("chat", "chats", 1), ("chat", "hat", 1), ("chat", "chut", 1),
    ("ab", "ba", 2), ("kitten", "sitting", 3), ("éte", "été", 1),
])
def test_edit_distance_known_values(a, b, d):
    assert edit_distance(a, b) == d
    assert edit_distance(b, a) == d


def test_squeeze_repeats(lex):
    assert squeeze_repeats("mercrediiii", lex) == "mercredi"
    assert squeeze_repeats("viiille", lex) == "ville"
    assert squeeze_repeats("mot", lex) == "mot"
    # digit runs stay: years must survive
    assert squeeze_repeats("1111", lex) == "1111"
    assert squeeze_repeats("18880", lex) == "18880"
    # no lexicon hit: every run collapses to one character
    assert squeeze_repeats("xxxyyyy", lex) == "xy"


def test_squeeze_prefers_lexicon_arbitration():
    lex = Lexicon({"belle": 5})
    # run of three l: candidates "bele" (1) then "belle" (2); only the
    # two-character form is a word
    assert squeeze_repeats("belllle", lex) == "belle"


def test_spell_correct_passthroughs(lex):
    assert spell_correct("12", lex, False) == ("12", False, False)
    assert spell_correct("M.", lex, False) == ("M.", False, False)
    assert spell_correct("bonjour", lex, False) == ("bonjour", False, False)
    # capitalized mid-sentence: presumed proper noun
    assert spell_correct("Dupont", lex, False) == ("Dupont", False, False)


def test_spell_correct_fixes_and_flags(lex):
    assert spell_correct("bonjoar", lex, False) == ("bonjour", True, False)
    assert spell_correct("xyzzy", lex, False) == ("xyzzy", False, True)
    # sentence-initial capitalized tokens are eligible for correction
    text, corrected, unknown = spell_correct("Bonjoar", lex, True)
    assert (text, corrected, unknown) == ("Bonjour", True, False)
    assert spell_correct("MAIRF", lex, True) == ("MAIRE", True, False)


def test_spell_correct_tie_break():
    lex = Lexicon({"ville": 52, "villes": 9})
    # both at distance 1; higher frequency wins
    assert spell_correct("villa", lex, False).text == "ville"
    tie = Lexicon({"bal": 7, "bac": 7})
    # equal frequency: lexicographic order
    assert spell_correct("bas", tie, False).text == "bac"


def test_lexicon_candidates_match_bruteforce():
    words = ["ville", "villes", "vile", "vallee", "halle", "col", "cola", "a"]
    lex = Lexicon({w: i for i, w in enumerate(words)})
    for probe in ["ville", "vil", "villa", "colle", "xyz", "a", ""]:
        got = {w for w, _ in lex.candidates(probe)}
        want = {w for w in words if edit_distance(probe, w) <= 1}
        assert got == want, probe


def test_dehyphenate_merges_and_keeps_refs():
    page = parse_blocks([{"lines": [["le", "docu"], ["ment", "la"]], "hyp": 0}])
    tokens, warnings = dehyphenate(iter_source_lines([page]))
    assert [t.text for t in tokens] == ["le", "document", "la"]
    assert not warnings
    merged = tokens[1]
    assert merged.corrections == (Correction.DEHYPHENATED,)
    assert len(merged.refs) == 2
    assert merged.refs[0].line_id != merged.refs[1].line_id


def test_dehyphenate_strips_literal_hyphen():
    page = parse_blocks([{"lines": [["docu-"], ["ment"]], "hyp": 0}])
    tokens, _ = dehyphenate(iter_source_lines([page]))
    assert [t.text for t in tokens] == ["document"]


def test_dehyphenate_chain():
    # two consecutive hyphenated lines collapse into a single token
    from archive_lens.alto import TextLine
    from archive_lens.normalize import SourceLine
    page = parse_blocks([{"lines": [["extra"], ["ordi"], ["naire"]]}])
    chain = [
        SourceLine("p1", "b1", TextLine("l1", None, page.blocks[0].lines[0].tokens, True)),
        SourceLine("p1", "b1", TextLine("l2", None, page.blocks[0].lines[1].tokens, True)),
        SourceLine("p1", "b1", TextLine("l3", None, page.blocks[0].lines[2].tokens, False)),
    ]
    tokens, warnings = dehyphenate(chain)
    assert [t.text for t in tokens] == ["extraordinaire"]
    assert tokens[0].corrections.count(Correction.DEHYPHENATED) == 2
    assert len(tokens[0].refs) == 3
    assert not warnings


def test_dehyphenate_dangling_warns():
    page = parse_blocks([{"lines": [["seul", "frag-"]], "hyp": 0}])
    tokens, warnings = dehyphenate(iter_source_lines([page]))
    assert [t.text for t in tokens] == ["seul", "frag-"]
    assert len(warnings) == 1 and "dangling" in warnings[0]


def test_dehyphenate_skips_empty_line():
    from archive_lens.alto import TextLine
    from archive_lens.normalize import SourceLine
    page = parse_blocks([{"lines": [["docu"], ["ment"]], "hyp": 0}])
    lines = iter_source_lines([page])
    empty = SourceLine("p1", "b1", TextLine("lx", None, (), False))
    tokens, _ = dehyphenate([lines[0], empty, lines[1]])
    assert [t.text for t in tokens] == ["document"]


def test_normalize_lines_chain(lex):
    page = parse_blocks([{
        "lines": [
            ["le", "mercrediiii", "%%", "docu"],
            ["ment", "bonjoar", "y", "z"],
        ],
        "hyp": 0,
    }])
    tokens, stats = normalize_lines(iter_source_lines([page]), lex)
    texts = [t.text for t in tokens if not t.removed]
    assert texts == ["le", "mercredi", "document", "bonjour", "y"]
    assert stats.tokens_in == 7  # dehyphenation merged two strings
    assert stats.tokens_kept == 5
    assert stats.tokens_removed == 2
    assert stats.tokens_in == stats.tokens_kept + stats.tokens_removed
    assert stats.dehyphenated == 1
    assert stats.squeezed == 1
    assert stats.spell_corrected == 1


def test_normalize_sentence_initial_tracking(lex):
    # "Bonjoar" opens the block: eligible; "Dupont" mid-sentence: skipped
    page = parse_blocks([{"lines": [["Bonjoar", "le", "Dupont"]]}])
    tokens, _ = normalize_lines(iter_source_lines([page]), lex)
    assert [t.text for t in tokens] == ["Bonjour", "le", "Dupont"]


def test_normalize_conservation_on_fixtures(fixture_pages, lexicon):
    for pages in fixture_pages.values():
        tokens, stats = normalize_lines(iter_source_lines(pages), lexicon)
        assert stats.tokens_in == stats.tokens_kept + stats.tokens_removed
        assert stats.tokens_kept == sum(1 for t in tokens if not t.removed)


def test_lexicon_from_tsv(lexicon):
    assert "bonjour" in lexicon
    assert "BONJOUR" in lexicon
    assert lexicon.frequency("bonjour") == 40
    assert "documant" not in lexicon
    assert len(lexicon) > 100
