"""Config loading, path resolution and validation."""

from pathlib import Path

import pytest

from archive_lens.config import ENV_CONFIG, load_config, resolve_config_path
from archive_lens.errors import ConfigError
from archive_lens.layout import DEFAULT_ABBREVIATIONS

from conftest import FIXTURES, write_config


def base_config(tmp: Path, extra: str = "") -> Path:
    (tmp / "manifest.json").write_text("[]", encoding="utf-8")
    (tmp / "lex.tsv").write_text("mot\t1\n", encoding="utf-8")
    text = "\n".join([
        "[paths]",
        'manifest = "manifest.json"',
        'lexicon = "lex.tsv"',
        'output_dir = "out"',
        'index_dir = "idx"',
        "",
        extra,
    ])
    cfg = tmp / "config.toml"
    cfg.write_text(text, encoding="utf-8")
    return cfg


def test_load_fixture_config(tmp_path):
    config = load_config(write_config(tmp_path))
    assert config.manifest == FIXTURES / "manifest.json"
    assert config.lexicon == FIXTURES / "resources" / "lexicon.tsv"
    assert len(config.gazetteers) == 2
    assert len(config.profiles) == 3
    assert config.output_dir == tmp_path / "bundles"
    assert config.index_dir == tmp_path / "index"
    assert config.jobs == 2
    assert config.service.port == 8123
    assert config.service.host == "127.0.0.1"
    assert config.service.cors_origins == ("*",)
    assert config.service.max_page_size == 100
    assert config.source == (tmp_path / "config.toml").resolve()


def test_relative_paths_resolve_against_config_dir(tmp_path):
    config = load_config(base_config(tmp_path))
    assert config.manifest == (tmp_path / "manifest.json").resolve()
    assert config.lexicon == (tmp_path / "lex.tsv").resolve()
    assert config.output_dir == (tmp_path / "out").resolve()
    assert config.index_dir == (tmp_path / "idx").resolve()
    assert config.gazetteers == ()
    assert config.profiles == ()
    assert config.jobs == 1


def test_layout_defaults_and_abbreviation_extension(tmp_path):
    config = load_config(base_config(tmp_path, '[layout]\nabbreviations = ["zzz."]'))
    assert config.layout.header_band == 0.08
    assert config.layout.header_recurrence == 0.5
    assert config.layout.title_font_ratio == 1.3
    assert config.layout.title_max_tokens == 10
    assert "zzz." in config.layout.abbreviations
    assert DEFAULT_ABBREVIATIONS <= config.layout.abbreviations


def test_config_file_not_found(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.toml")


def test_invalid_toml(tmp_path):
    cfg = tmp_path / "config.toml"
    cfg.write_text("[paths\nmanifest = ", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(cfg)


def test_missing_required_path_key(tmp_path):
    cfg = tmp_path / "config.toml"
    cfg.write_text('[paths]\nmanifest = "m.json"\n', encoding="utf-8")
    with pytest.raises(ConfigError, match="lexicon"):
        load_config(cfg)


def test_missing_referenced_files(tmp_path):
    cfg = base_config(tmp_path)
    (tmp_path / "manifest.json").unlink()
    with pytest.raises(ConfigError, match="manifest"):
        load_config(cfg)

    cfg = base_config(tmp_path, '[paths2]\n')
    config_text = cfg.read_text(encoding="utf-8").replace(
        'index_dir = "idx"', 'index_dir = "idx"\ngazetteers = ["gone.json"]'
    )
    cfg.write_text(config_text, encoding="utf-8")
    with pytest.raises(ConfigError, match="gazetteer"):
        load_config(cfg)


@pytest.mark.parametrize("section", [
    "[layout]\nheader_band = 0.0",
    "[layout]\nheader_band = 1.0",
    "[layout]\nheader_recurrence = 0.0",
    "[layout]\nheader_recurrence = 1.5",
    "[layout]\ntitle_font_ratio = 0.9",
    "[layout]\ntitle_max_tokens = 0",
    "[service]\nport = 0",
    "[service]\nport = 70000",
    "[service]\nmax_page_size = 0",
    "[pipeline]\njobs = 0",
])
def test_threshold_validation(tmp_path, section):
    with pytest.raises(ConfigError):
        load_config(base_config(tmp_path, section))


def test_resolve_config_path_cli_wins(monkeypatch):
    monkeypatch.setenv(ENV_CONFIG, "/env/config.toml")
    assert resolve_config_path("/cli/config.toml") == Path("/cli/config.toml")


def test_resolve_config_path_env_fallback(monkeypatch):
    monkeypatch.setenv(ENV_CONFIG, "/env/config.toml")
    assert resolve_config_path(None) == Path("/env/config.toml")


def test_resolve_config_path_requires_one(monkeypatch):
    monkeypatch.delenv(ENV_CONFIG, raising=False)
    with pytest.raises(ConfigError):
        resolve_config_path(None)
