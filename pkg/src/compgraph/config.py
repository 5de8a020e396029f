"""Pipeline configuration: dataclass plus the key=value config file format.

Config files hold one ``key = value`` pair per line; ``#`` starts a
comment. Lists are comma-separated. Recognizers are named in
``recognizers`` and optionally refined with ``recognizer.<id>.kind``,
``recognizer.<id>.endpoint`` and ``recognizer.<id>.enabled`` lines (the
ids "gazetteer" and "heuristic" default to their built-in kinds).
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError
from .extractor import DEFAULT_KEYWORDS, ExtractionRules
from .linker import DEFAULT_FUZZY_THRESHOLD
from .recognize import RecognizerSpec

BUNDLED_KB_PATH = Path(__file__).parent / "data" / "kb_sp100.json"
BUNDLED_FIXTURE_DIR = Path(__file__).parent / "data" / "fixtures"


def default_recognizers() -> list[RecognizerSpec]:
    return [RecognizerSpec(id="gazetteer", kind="gazetteer"),
            RecognizerSpec(id="heuristic", kind="heuristic")]


@dataclass
class PipelineConfig:
    input_mode: str = "local_dir"  # local_dir | network
    local_dir: str | None = None
    cache_dir: str = ".compgraph-cache"
    kb_path: str = str(BUNDLED_KB_PATH)
    output_path: str = "graph.json"
    corpus_tag: str = "default"
    keywords: list[str] = field(default_factory=lambda: list(DEFAULT_KEYWORDS))
    recognizers: list[RecognizerSpec] = field(default_factory=default_recognizers)
    fuzzy_threshold: float = DEFAULT_FUZZY_THRESHOLD
    parallelism: int = field(default_factory=lambda: os.cpu_count() or 1)
    heading_font_scale: float = 1.15
    heading_max_len: int = 60
    ciks: list[str] = field(default_factory=list)  # network mode corpus
    years: tuple[int, int] | None = None
    dump_sections_dir: str | None = None
    dump_subsections_dir: str | None = None

    def validate(self):
        if self.input_mode not in ("local_dir", "network"):
            raise ConfigError(f"input_mode must be local_dir or network, got {self.input_mode!r}")
        if self.input_mode == "local_dir" and not self.local_dir:
            raise ConfigError("local_dir mode needs a local_dir path")
        if self.input_mode == "network" and not self.ciks:
            raise ConfigError("network mode needs at least one cik")
        if not 0.0 < self.fuzzy_threshold <= 1.0:
            raise ConfigError(f"fuzzy_threshold must be in (0, 1], got {self.fuzzy_threshold}")
        if not any(r.enabled for r in self.recognizers):
            raise ConfigError("at least one recognizer must be enabled")
        ids = [r.id for r in self.recognizers]
        if len(ids) != len(set(ids)):
            raise ConfigError("recognizer ids must be unique")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        if not self.keywords:
            raise ConfigError("keyword list must not be empty")

    def extraction_rules(self) -> ExtractionRules:
        return ExtractionRules(keywords=tuple(self.keywords),
                               heading_font_scale=self.heading_font_scale,
                               heading_max_len=self.heading_max_len)


_LIST_KEYS = {"keywords", "recognizers", "ciks"}
_KNOWN_KEYS = {
    "input_mode", "local_dir", "cache_dir", "kb_path", "output_path",
    "corpus_tag", "keywords", "recognizers", "fuzzy_threshold", "parallelism",
    "heading_font_scale", "heading_max_len", "ciks", "years",
    "dump_sections_dir", "dump_subsections_dir",
}


def parse_config_text(text: str, base_dir: Path | None = None) -> PipelineConfig:
    pairs: dict[str, str] = {}
    recognizer_opts: dict[str, dict[str, str]] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw_line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key.startswith("recognizer."):
            parts = key.split(".")
            if len(parts) != 3 or parts[2] not in ("kind", "endpoint", "enabled", "timeout"):
                raise ConfigError(f"line {lineno}: bad recognizer option {key!r}")
            recognizer_opts.setdefault(parts[1], {})[parts[2]] = value
        elif key in _KNOWN_KEYS:
            pairs[key] = value
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")

    config = PipelineConfig()
    for key, value in pairs.items():
        if key in _LIST_KEYS:
            items = [item.strip() for item in value.split(",") if item.strip()]
            if key == "recognizers":
                config.recognizers = [_build_recognizer(rid, recognizer_opts.get(rid, {}))
                                      for rid in items]
            else:
                setattr(config, key, items)
        elif key == "years":
            config.years = _parse_years(value)
        elif key == "fuzzy_threshold":
            config.fuzzy_threshold = _parse_float(key, value)
        elif key == "heading_font_scale":
            config.heading_font_scale = _parse_float(key, value)
        elif key in ("parallelism", "heading_max_len"):
            try:
                setattr(config, key, int(value))
            except ValueError as exc:
                raise ConfigError(f"{key} must be an integer, got {value!r}") from exc
        else:
            setattr(config, key, value)

    if "recognizers" not in pairs and recognizer_opts:
        raise ConfigError("recognizer.<id>.* options given without a recognizers list")
    if base_dir is not None:
        config = _resolve_paths(config, base_dir)
    config.validate()
    return config


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    try:
        text = path.read_text("utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, base_dir=path.parent)


def _build_recognizer(rid: str, opts: dict[str, str]) -> RecognizerSpec:
    kind = opts.get("kind") or (rid if rid in ("gazetteer", "heuristic") else "external")
    enabled = opts.get("enabled", "true").lower() in ("1", "true", "yes", "on")
    try:
        spec = RecognizerSpec(id=rid, kind=kind, endpoint=opts.get("endpoint"),
                              enabled=enabled,
                              timeout=float(opts["timeout"]) if "timeout" in opts else 10.0)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return spec


def _parse_years(value: str) -> tuple[int, int]:
    try:
        if ".." in value:
            lo, hi = value.split("..", 1)
            return (int(lo), int(hi))
        year = int(value)
        return (year, year)
    except ValueError as exc:
        raise ConfigError(f"years must look like 2018..2020, got {value!r}") from exc


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError as exc:
        raise ConfigError(f"{key} must be a number, got {value!r}") from exc


def _resolve_paths(config: PipelineConfig, base_dir: Path) -> PipelineConfig:
    def resolve(p: str | None) -> str | None:
        if p is None:
            return None
        path = Path(p)
        return str(path if path.is_absolute() else (base_dir / path))

    return replace(config,
                   local_dir=resolve(config.local_dir),
                   cache_dir=resolve(config.cache_dir),
                   kb_path=resolve(config.kb_path),
                   output_path=resolve(config.output_path),
                   dump_sections_dir=resolve(config.dump_sections_dir),
                   dump_subsections_dir=resolve(config.dump_subsections_dir))
