"""Service configuration: one TOML document wiring every module together.

Relative paths are resolved against the config file's directory. When
``fixtures_dir`` is set, all fetching and text extraction run against canned
files, which is how the test suite and demos stay off the network.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .expansion import DEFAULT_DOC_WEIGHTS, DEFAULT_K, DEFAULT_LEVEL
from .mindmap import ElementKind
from .orchestrator import DEFAULT_MIN_SECTION_HITS, DEFAULT_TIMEOUT_S

ENV_CONFIG_VAR = "MINDFORGE_CONFIG"

DEFAULT_LIMIT = 10


@dataclass
class SourceSpec:
    name: str
    config_path: Path
    result_mapping: dict[str, str]
    priority: int


@dataclass
class EngineSpec:
    name: str
    config_path: Path
    result_mapping: dict[str, str]
    filetype_clause: str = "filetype:{ext}"


@dataclass
class Defaults:
    k: int = DEFAULT_K
    level: int = DEFAULT_LEVEL
    limit: int = DEFAULT_LIMIT
    timeout_s: float = DEFAULT_TIMEOUT_S
    m_sections: int = DEFAULT_MIN_SECTION_HITS


@dataclass
class ServiceConfig:
    mindmap_path: Path
    catalog_path: Path
    stopword_path: Optional[Path] = None
    fixtures_dir: Optional[Path] = None
    static_dir: Optional[Path] = None
    doc_weights: dict[ElementKind, float] = dc_field(
        default_factory=lambda: dict(DEFAULT_DOC_WEIGHTS))
    defaults: Defaults = dc_field(default_factory=Defaults)
    sources: list[SourceSpec] = dc_field(default_factory=list)
    engines: dict[str, EngineSpec] = dc_field(default_factory=dict)

    def source_names(self) -> list[str]:
        return [s.name for s in self.sources]


def _resolve(base: Path, raw: str) -> Path:
    path = Path(raw)
    return path if path.is_absolute() else (base / path)


def _require_file(path: Path, what: str) -> Path:
    if not path.is_file():
        raise ConfigError(f"{what} does not exist: {path}")
    return path


def _parse_doc_weights(raw: dict) -> dict[ElementKind, float]:
    weights = dict(DEFAULT_DOC_WEIGHTS)
    by_value = {kind.value: kind for kind in ElementKind}
    for key, value in raw.items():
        if key not in by_value:
            raise ConfigError(f"unknown element kind in doc_weights: {key!r}")
        weight = float(value)
        if weight <= 0:
            raise ConfigError(f"doc_weights.{key} must be positive")
        weights[by_value[key]] = weight
    return weights


def load_config(path: Optional[str] = None) -> ServiceConfig:
    """Load and validate a service config.

    The ``MINDFORGE_CONFIG`` environment variable overrides ``path``.
    Startup problems (missing files, duplicate priorities, bad weights) all
    raise :class:`ConfigError`.
    """
    env_path = os.environ.get(ENV_CONFIG_VAR)
    chosen = env_path or path
    if not chosen:
        raise ConfigError(f"no config path given and {ENV_CONFIG_VAR} is unset")
    config_path = Path(chosen)
    if not config_path.is_file():
        raise ConfigError(f"config file does not exist: {config_path}")

    with open(config_path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"cannot parse {config_path}: {exc}") from exc

    base = config_path.parent

    try:
        mindmap_path = _require_file(_resolve(base, data["mindmap_path"]), "mindmap file")
        catalog_path = _require_file(_resolve(base, data["catalog_path"]), "venue catalog")
    except KeyError as exc:
        raise ConfigError(f"config is missing required key {exc.args[0]!r}") from exc

    stopword_path = None
    if data.get("stopword_path"):
        stopword_path = _require_file(_resolve(base, data["stopword_path"]), "stopword list")

    fixtures_dir = None
    if data.get("fixtures_dir"):
        fixtures_dir = _resolve(base, data["fixtures_dir"])
        if not fixtures_dir.is_dir():
            raise ConfigError(f"fixtures_dir does not exist: {fixtures_dir}")

    static_dir = None
    if data.get("static_dir"):
        static_dir = _resolve(base, data["static_dir"])

    defaults_raw = data.get("defaults", {})
    defaults = Defaults(
        k=int(defaults_raw.get("k", DEFAULT_K)),
        level=int(defaults_raw.get("level", DEFAULT_LEVEL)),
        limit=int(defaults_raw.get("limit", DEFAULT_LIMIT)),
        timeout_s=float(defaults_raw.get("timeout_s", DEFAULT_TIMEOUT_S)),
        m_sections=int(defaults_raw.get("m_sections", DEFAULT_MIN_SECTION_HITS)),
    )
    if defaults.k < 0 or defaults.level < 1 or defaults.limit < 1:
        raise ConfigError("defaults must satisfy k >= 0, level >= 1, limit >= 1")

    sources = []
    for entry in data.get("sources", []):
        try:
            sources.append(SourceSpec(
                name=entry["name"],
                config_path=_require_file(_resolve(base, entry["config_path"]),
                                          f"wrapper config for {entry['name']}"),
                result_mapping=dict(entry["result_mapping"]),
                priority=int(entry["priority"]),
            ))
        except KeyError as exc:
            raise ConfigError(f"source entry is missing key {exc.args[0]!r}") from exc
    priorities = [s.priority for s in sources]
    if len(set(priorities)) != len(priorities):
        raise ConfigError("source priorities must be unique")
    names = [s.name for s in sources]
    if len(set(names)) != len(names):
        raise ConfigError("source names must be unique")
    sources.sort(key=lambda s: s.priority)

    engines = {}
    for role, entry in data.get("engines", {}).items():
        if role not in ("horizontal", "blog"):
            raise ConfigError(f"unknown engine role {role!r} (expected horizontal/blog)")
        try:
            engines[role] = EngineSpec(
                name=entry.get("name", role),
                config_path=_require_file(_resolve(base, entry["config_path"]),
                                          f"wrapper config for engine {role}"),
                result_mapping=dict(entry["result_mapping"]),
                filetype_clause=entry.get("filetype_clause", "filetype:{ext}"),
            )
        except KeyError as exc:
            raise ConfigError(f"engine entry {role!r} is missing key {exc.args[0]!r}") from exc

    return ServiceConfig(
        mindmap_path=mindmap_path,
        catalog_path=catalog_path,
        stopword_path=stopword_path,
        fixtures_dir=fixtures_dir,
        static_dir=static_dir,
        doc_weights=_parse_doc_weights(data.get("doc_weights", {})),
        defaults=defaults,
        sources=sources,
        engines=engines,
    )
