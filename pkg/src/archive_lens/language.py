"""Character n-gram language identification.

Rank-order profiles over character 1..4-grams, compared with the
out-of-place measure: each n-gram of the text profile contributes the
absolute rank difference against the reference profile, or the profile
size when absent. The smallest total wins.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .errors import ArchiveLensError

NGRAM_SIZES = (1, 2, 3, 4)
DEFAULT_PROFILE_SIZE = 400
MIN_TEXT_LENGTH = 40

_WS = re.compile(r"\s+")


class NoProfiles(ArchiveLensError):
    """detect_language called with an empty profile set."""


@dataclass(frozen=True)
class LanguageProfile:
    language: str
    ngrams: tuple[str, ...]  # rank order, best first

    @property
    def size(self) -> int:
        return len(self.ngrams)

    def ranks(self) -> dict[str, int]:
        return {g: i for i, g in enumerate(self.ngrams, 1)}


def _ranked_ngrams(text: str, k: int) -> list[str]:
    text = _WS.sub(" ", text.casefold()).strip()
    counts: Counter[str] = Counter()
    for n in NGRAM_SIZES:
        for i in range(len(text) - n + 1):
            counts[text[i:i + n]] += 1
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [g for g, _ in ordered[:k]]


def build_profile(text: str, language: str, k: int = DEFAULT_PROFILE_SIZE) -> LanguageProfile:
    ngrams = _ranked_ngrams(text, k)
    if len(ngrams) < k:
        raise ValueError(f"sample for {language!r} yields only {len(ngrams)} n-grams, need {k}")
    return LanguageProfile(language, tuple(ngrams))


def detect_language(
    text: str,
    profiles: Sequence[LanguageProfile],
    min_length: int = MIN_TEXT_LENGTH,
) -> Optional[tuple[str, float]]:
    """Best-matching language and a margin-based confidence, or None for
    texts shorter than min_length (after whitespace collapsing)."""
    if not profiles:
        raise NoProfiles("no language profiles given")
    sizes = {p.size for p in profiles}
    if len(sizes) != 1:
        raise ValueError("profiles in one set must share their size")
    k = sizes.pop()

    collapsed = _WS.sub(" ", text).strip()
    if len(collapsed) < min_length:
        return None

    text_ngrams = _ranked_ngrams(text, k)
    distances: list[tuple[float, str]] = []
    for profile in profiles:
        ranks = profile.ranks()
        total = 0
        for i, gram in enumerate(text_ngrams, 1):
            j = ranks.get(gram)
            total += abs(i - j) if j is not None else k
        distances.append((total, profile.language))
    distances.sort()
    best, runner = distances[0], distances[1] if len(distances) > 1 else None
    if runner is None or runner[0] <= 0:
        return best[1], 1.0
    confidence = (runner[0] - best[0]) / runner[0]
    return best[1], confidence


def load_profiles(paths: Sequence[Path | str]) -> list[LanguageProfile]:
    """Load profile JSON files: {"language": ..., "ngrams": [...]}."""
    profiles = []
    for p in paths:
        data = json.loads(Path(p).read_text(encoding="utf-8"))
        profiles.append(LanguageProfile(data["language"], tuple(data["ngrams"])))
    return profiles


def save_profile(profile: LanguageProfile, path: Path | str) -> None:
    Path(path).write_text(
        json.dumps({"language": profile.language, "ngrams": list(profile.ngrams)},
                   ensure_ascii=False, indent=1),
        encoding="utf-8",
    )
