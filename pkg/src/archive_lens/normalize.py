"""Post-OCR token cleanup.

The correction chain, applied in this order to the token stream of one
document: rejoin words split by end-of-line hyphenation (HYP marks),
drop garbage tokens, collapse stuttered character runs, then fix unknown
words with a dictionary lookup restricted to edit distance 1. Every
change is recorded on the token so provenance survives to the output.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .alto import AltoPage, BBox, TextLine
from .errors import ArchiveLensError


class Correction(str, Enum):
    DEHYPHENATED = "dehyphenated"
    SQUEEZED = "squeezed"
    SPELL_CORRECTED = "spell_corrected"
    REMOVED = "removed"


@dataclass(frozen=True)
class TokenRef:
    """Position of a source token: page, block, line, index in line."""

    page_id: str
    block_id: str
    line_id: str
    token_index: int
    bbox: Optional[BBox] = None


@dataclass
class NormalizedToken:
    text: str
    original: str
    refs: tuple[TokenRef, ...]
    corrections: tuple[Correction, ...] = ()
    unknown: bool = False
    char_span: Optional[tuple[int, int]] = None

    @property
    def correction(self) -> Optional[Correction]:
        """Most recent correction applied, None for untouched tokens."""
        return self.corrections[-1] if self.corrections else None

    @property
    def removed(self) -> bool:
        return Correction.REMOVED in self.corrections


# Single-character survivors of the garbage rule: digits always, plus
# these French one-letter words (the paper's list is open-ended).
DEFAULT_SINGLE_EXCEPTIONS = frozenset({"a", "à", "y", "ô"})

_HAS_ALNUM = re.compile(r"[^\W_]", re.UNICODE)
_LETTER_RUN = re.compile(r"([^\W\d_])\1{2,}", re.UNICODE)
_TERMINAL = (".", "?", "!")


def strip_garbage(token: str, exceptions: frozenset[str] = DEFAULT_SINGLE_EXCEPTIONS) -> bool:
    """Keep/remove verdict: False for pure non-alphanumeric sequences and
    for single characters that are neither digits nor known one-letter words.
    """
    if not _HAS_ALNUM.search(token):
        return False
    if len(token) == 1:
        return token.isdigit() or token.casefold() in exceptions
    return True


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance with unit insert/delete/substitute costs."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        current = [i]
        for j, cb in enumerate(b, 1):
            current.append(min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


def _deletions(word: str) -> set[str]:
    return {word[:i] + word[i + 1:] for i in range(len(word))}


class Lexicon:
    """Word list with frequencies and a symmetric-delete index.

    Entries are stored casefolded. The deletion index maps every entry and
    each of its single-character-deletion variants back to the candidate
    entries, which turns a distance-1 lookup into a handful of dict probes
    instead of a scan of the whole dictionary. Candidates from the index
    are still verified with the true edit distance: sharing a deletion
    variant is necessary but not sufficient (e.g. "ab" and "ba" share both
    variants yet are 2 edits apart).
    """

    def __init__(self, frequencies: Mapping[str, int]):
        self._freq: dict[str, int] = {}
        self._deletes: dict[str, list[str]] = {}
        for word, freq in frequencies.items():
            word = word.strip().casefold()
            if not word:
                continue
            if freq < 0:
                raise ValueError(f"negative frequency for {word!r}")
            self._freq[word] = max(self._freq.get(word, 0), int(freq))
        for word in self._freq:
            for key in {word} | _deletions(word):
                self._deletes.setdefault(key, []).append(word)
        for candidates in self._deletes.values():
            candidates.sort()

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "Lexicon":
        return cls({w: 0 for w in words})

    @classmethod
    def from_tsv(cls, path: Path | str) -> "Lexicon":
        """Load a "word<TAB>frequency" file; a missing frequency means 0."""
        freqs: dict[str, int] = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                word, _, freq = line.partition("\t")
                freqs[word] = int(freq) if freq.strip() else 0
        return cls(freqs)

    def __contains__(self, word: str) -> bool:
        return word.casefold() in self._freq

    def __len__(self) -> int:
        return len(self._freq)

    def __iter__(self):
        return iter(self._freq)

    def frequency(self, word: str) -> int:
        return self._freq.get(word.casefold(), 0)

    def candidates(self, word: str) -> list[tuple[str, int]]:
        """All entries at edit distance <= 1 from word, with frequencies."""
        word = word.casefold()
        pool: set[str] = set()
        for key in {word} | _deletions(word):
            pool.update(self._deletes.get(key, ()))
        return [(w, self._freq[w]) for w in sorted(pool) if edit_distance(word, w) <= 1]


def squeeze_repeats(token: str, lexicon: Lexicon) -> str:
    """Collapse letter runs of length >= 3.

    Each run can collapse to one or two characters; candidates are tried
    in that order per run and the first form found in the lexicon wins,
    otherwise every run collapses to a single character. Digit runs are
    left alone: the garbage rule deliberately protects numbers and years
    must survive for temporal annotation.
    """
    runs = list(_LETTER_RUN.finditer(token))
    if not runs:
        return token

    def build(choices: tuple[int, ...]) -> str:
        parts = []
        pos = 0
        for run, keep in zip(runs, choices):
            parts.append(token[pos:run.start()])
            parts.append(run.group(1) * keep)
            pos = run.end()
        parts.append(token[pos:])
        return "".join(parts)

    for choices in itertools.product((1, 2), repeat=len(runs)):
        candidate = build(choices)
        if candidate.casefold() in lexicon:
            return candidate
    return build((1,) * len(runs))


class SpellResult(NamedTuple):
    text: str
    corrected: bool
    unknown: bool


def spell_correct(token: str, lexicon: Lexicon, sentence_initial: bool) -> SpellResult:
    """Dictionary spell correction for alphabetic tokens.

    Known words and presumed proper nouns (capitalized, not sentence
    initial) pass through. Otherwise the best lexicon entry at edit
    distance <= 1 replaces the token (highest frequency, ties broken
    lexicographically); with no candidate the token is flagged unknown.
    """
    if not token.isalpha():
        return SpellResult(token, False, False)
    folded = token.casefold()
    if folded in lexicon:
        return SpellResult(token, False, False)
    if token[0].isupper() and not sentence_initial:
        return SpellResult(token, False, False)
    candidates = lexicon.candidates(folded)
    if not candidates:
        return SpellResult(token, False, True)
    best = min(candidates, key=lambda wf: (-wf[1], wf[0]))[0]
    if token.isupper() and len(token) > 1:
        best = best.upper()
    elif token[0].isupper():
        best = best[0].upper() + best[1:]
    return SpellResult(best, True, False)


@dataclass(frozen=True)
class SourceLine:
    """A text line in document reading order, with its addressing context."""

    page_id: str
    block_id: str
    line: TextLine


def iter_source_lines(pages: Sequence[AltoPage]) -> list[SourceLine]:
    out = []
    for page in pages:
        for block in page.blocks:
            for line in block.lines:
                out.append(SourceLine(page.page_id, block.block_id, line))
    return out


def dehyphenate(lines: Sequence[SourceLine]) -> tuple[list[NormalizedToken], list[str]]:
    """Rejoin words split at line ends.

    For each line whose last child is a HYP, its final token is merged
    with the first token of the next line that has any (the hyphen is
    dropped, both source positions kept). A hyphen dangling on the very
    last line keeps its literal fragment and yields a warning. Returns
    the token stream and the warnings.
    """
    tokens: list[NormalizedToken] = []
    warnings: list[str] = []
    pending: Optional[NormalizedToken] = None

    for src in lines:
        for i, span in enumerate(src.line.tokens):
            ref = TokenRef(src.page_id, src.block_id, src.line.line_id, i, span.bbox)
            if pending is not None:
                left = pending.text[:-1] if pending.text.endswith("-") else pending.text
                tokens.append(NormalizedToken(
                    text=left + span.content,
                    original=pending.original + span.content,
                    refs=pending.refs + (ref,),
                    corrections=pending.corrections + (Correction.DEHYPHENATED,),
                ))
                pending = None
            else:
                tokens.append(NormalizedToken(text=span.content, original=span.content, refs=(ref,)))
        if src.line.trailing_hyphen and tokens and pending is None and src.line.tokens:
            pending = tokens.pop()

    if pending is not None:
        warnings.append(f"dangling hyphen at end of document: {pending.text!r} kept as-is")
        tokens.append(pending)
    return tokens, warnings


@dataclass
class NormalizeStats:
    tokens_in: int = 0
    tokens_kept: int = 0
    tokens_removed: int = 0
    dehyphenated: int = 0
    squeezed: int = 0
    spell_corrected: int = 0
    unknown: int = 0
    warnings: list[str] = field(default_factory=list)


def normalize_lines(
    lines: Sequence[SourceLine],
    lexicon: Lexicon,
    single_exceptions: frozenset[str] = DEFAULT_SINGLE_EXCEPTIONS,
) -> tuple[list[NormalizedToken], NormalizeStats]:
    """Run the whole correction chain over one document's lines.

    Sentence position for the proper-noun test is tracked on the stream:
    a token is sentence initial when it is the first kept token of its
    block or the previous kept token ends with a sentence terminator.
    """
    stats = NormalizeStats()
    tokens, warnings = dehyphenate(lines)
    stats.warnings.extend(warnings)
    stats.tokens_in = len(tokens)
    stats.dehyphenated = sum(1 for t in tokens if Correction.DEHYPHENATED in t.corrections)

    previous_kept: Optional[NormalizedToken] = None
    for token in tokens:
        if not strip_garbage(token.text, single_exceptions):
            token.corrections += (Correction.REMOVED,)
            token.text = ""
            stats.tokens_removed += 1
            continue

        squeezed = squeeze_repeats(token.text, lexicon)
        if squeezed != token.text:
            token.text = squeezed
            token.corrections += (Correction.SQUEEZED,)
            stats.squeezed += 1

        sentence_initial = (
            previous_kept is None
            or previous_kept.refs[0].block_id != token.refs[0].block_id
            or previous_kept.text.endswith(_TERMINAL)
        )
        result = spell_correct(token.text, lexicon, sentence_initial)
        if result.corrected:
            token.text = result.text
            token.corrections += (Correction.SPELL_CORRECTED,)
            stats.spell_corrected += 1
        token.unknown = result.unknown
        if result.unknown:
            stats.unknown += 1

        stats.tokens_kept += 1
        previous_kept = token

    return tokens, stats
