"""Pipeline configuration: one TOML file drives every CLI command.

Relative paths are resolved against the config file's directory, so a
config can travel with its fixture tree.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .layout import DEFAULT_ABBREVIATIONS, LayoutConfig

ENV_CONFIG = "ARCHIVE_LENS_CONFIG"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    cors_origins: tuple[str, ...] = ("*",)
    max_page_size: int = 100


@dataclass
class PipelineConfig:
    manifest: Path
    lexicon: Path
    gazetteers: tuple[Path, ...]
    profiles: tuple[Path, ...]
    output_dir: Path
    index_dir: Path
    layout: LayoutConfig = field(default_factory=LayoutConfig)
    service: ServiceConfig = field(default_factory=ServiceConfig)
    jobs: int = 1
    source: Optional[Path] = None  # config file this was loaded from


def _resolve(base: Path, value: str) -> Path:
    path = Path(value)
    return path if path.is_absolute() else (base / path).resolve()


def _require_file(path: Path, what: str) -> Path:
    if not path.is_file():
        raise ConfigError(f"{what} not found: {path}")
    return path


def load_config(path: Path | str) -> PipelineConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    base = path.parent

    paths = raw.get("paths", {})
    for key in ("manifest", "lexicon", "output_dir", "index_dir"):
        if key not in paths:
            raise ConfigError(f"[paths] section lacks {key!r}")

    manifest = _require_file(_resolve(base, paths["manifest"]), "manifest")
    lexicon = _require_file(_resolve(base, paths["lexicon"]), "lexicon")
    gazetteers = tuple(
        _require_file(_resolve(base, p), "gazetteer") for p in paths.get("gazetteers", [])
    )
    profiles = tuple(
        _require_file(_resolve(base, p), "language profile") for p in paths.get("profiles", [])
    )

    layout_raw = raw.get("layout", {})
    abbreviations = frozenset(DEFAULT_ABBREVIATIONS) | frozenset(layout_raw.get("abbreviations", []))
    layout = LayoutConfig(
        header_band=float(layout_raw.get("header_band", 0.08)),
        header_recurrence=float(layout_raw.get("header_recurrence", 0.5)),
        title_font_ratio=float(layout_raw.get("title_font_ratio", 1.3)),
        title_max_tokens=int(layout_raw.get("title_max_tokens", 10)),
        abbreviations=abbreviations,
    )
    if not 0.0 < layout.header_band < 1.0:
        raise ConfigError("layout.header_band must be in (0, 1)")
    if not 0.0 < layout.header_recurrence <= 1.0:
        raise ConfigError("layout.header_recurrence must be in (0, 1]")
    if layout.title_font_ratio < 1.0:
        raise ConfigError("layout.title_font_ratio must be >= 1")
    if layout.title_max_tokens < 1:
        raise ConfigError("layout.title_max_tokens must be >= 1")

    service_raw = raw.get("service", {})
    service = ServiceConfig(
        host=str(service_raw.get("host", "127.0.0.1")),
        port=int(service_raw.get("port", 8080)),
        cors_origins=tuple(service_raw.get("cors_origins", ["*"])),
        max_page_size=int(service_raw.get("max_page_size", 100)),
    )
    if not 0 < service.port < 65536:
        raise ConfigError("service.port must be a valid TCP port")
    if service.max_page_size < 1:
        raise ConfigError("service.max_page_size must be >= 1")

    jobs = int(raw.get("pipeline", {}).get("jobs", 1))
    if jobs < 1:
        raise ConfigError("pipeline.jobs must be >= 1")

    return PipelineConfig(
        manifest=manifest,
        lexicon=lexicon,
        gazetteers=gazetteers,
        profiles=profiles,
        output_dir=_resolve(base, paths["output_dir"]),
        index_dir=_resolve(base, paths["index_dir"]),
        layout=layout,
        service=service,
        jobs=jobs,
        source=path.resolve(),
    )


def resolve_config_path(cli_value: Optional[str]) -> Path:
    """--config wins; the environment variable is the fallback."""
    if cli_value:
        return Path(cli_value)
    env = os.environ.get(ENV_CONFIG)
    if env:
        return Path(env)
    raise ConfigError(f"no config given: pass --config or set {ENV_CONFIG}")
