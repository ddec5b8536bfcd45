import pytest

from archive_lens.language import (
    MIN_TEXT_LENGTH,
    NoProfiles,
    build_profile,
    detect_language,
    load_profiles,
    save_profile,
)

from conftest import FIXTURES

FR = (
    "Le conseil municipal de la ville a tenu une longue séance hier soir "
    "devant les habitants du quartier, et la pluie n'a pas empêché la fête."
)
EN = (
    "The town council held a long meeting yesterday evening and the rain "
    "did not stop the festival on the main square of the old quarter."
)
DE = (
    "Der Gemeinderat hielt gestern Abend eine lange Sitzung ab und der "
    "Regen konnte das Fest auf dem großen Platz nicht verhindern."
)


@pytest.fixture(scope="module")
def profiles():
    return load_profiles([
        FIXTURES / "resources" / "profiles" / f"{lang}.json" for lang in ("fr", "en", "de")
    ])


def test_build_profile_deterministic():
    p1 = build_profile(FR * 3, "fr", k=250)
    p2 = build_profile(FR * 3, "fr", k=250)
    assert p1.language == "fr"
    assert p1.ngrams == p2.ngrams


def test_detect_each_language(profiles):
    for text, lang in ((FR, "fr"), (EN, "en"), (DE, "de")):
        detected = detect_language(text * 2, profiles)
        assert detected is not None
        got, confidence = detected
        assert got == lang, text
        assert 0.0 < confidence <= 1.0


def test_short_text_abstains(profiles):
    assert detect_language("trop court", profiles) is None
    assert detect_language("x" * (MIN_TEXT_LENGTH - 1), profiles) is None


def test_no_profiles_raises():
    with pytest.raises(NoProfiles):
        detect_language(FR, [])


def test_profile_roundtrip(tmp_path):
    profile = build_profile(EN * 2, "en", k=250)
    path = tmp_path / "en.json"
    save_profile(profile, path)
    loaded = load_profiles([path])
    assert len(loaded) == 1
    assert loaded[0].language == "en"
    assert loaded[0].ngrams == profile.ngrams
