"""Platform configuration: `key = value` lines with `#` comments.

    base_namespace = http://semaps.example/ns#
    listen = 127.0.0.1:8080
    data_dir = ./data
    kb_concepts = fixtures/kb/concepts.tsv
    kb_relations = fixtures/kb/relations.tsv
    expansion_depth = 1
    fetch_timeout = 5.0
    reliability.DirectWitness = 0.8
    source.nytimes = fixture fixtures/lod/nytimes.ttl
    source.dbpedia = remote https://dbpedia.org/sparql disabled

Relative paths resolve against the config file's directory. The config
path itself comes from the CLI or the SEMAPS_CONFIG environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from semaps.errors import ValidationError
from semaps.lod import FIXTURE, REMOTE, LodSource
from semaps.ontology import DEFAULT_BASE_NAMESPACE, SourceType

CONFIG_ENV_VAR = "SEMAPS_CONFIG"


@dataclass
class Config:
    base_namespace: str = DEFAULT_BASE_NAMESPACE
    host: str = "127.0.0.1"
    port: int = 8080
    data_dir: Path | None = None
    kb_concepts: Path | None = None
    kb_relations: Path | None = None
    sources: list[LodSource] = field(default_factory=list)
    reliability: dict[SourceType, float] = field(default_factory=dict)
    expansion_depth: int = 1
    fetch_timeout: float = 5.0

    def validate_files(self):
        """Referenced files must exist at startup (fixture sources included)."""
        for label, path in (("kb_concepts", self.kb_concepts), ("kb_relations", self.kb_relations)):
            if path is not None and not Path(path).is_file():
                raise ValidationError(f"{label} file does not exist: {path}")
        for source in self.sources:
            if source.kind == FIXTURE and source.enabled and not Path(source.target).is_file():
                raise ValidationError(
                    f"fixture file for source {source.name!r} does not exist: {source.target}"
                )


def resolve_config_path(cli_value: str | None) -> Path:
    value = cli_value or os.environ.get(CONFIG_ENV_VAR)
    if not value:
        raise ValidationError(
            f"no config file given (pass --config or set {CONFIG_ENV_VAR})"
        )
    path = Path(value)
    if not path.is_file():
        raise ValidationError(f"config file does not exist: {path}")
    return path


def load_config(path: str | Path) -> Config:
    path = Path(path)
    base_dir = path.parent
    config = Config()

    def resolve(p: str) -> Path:
        candidate = Path(p)
        return candidate if candidate.is_absolute() else base_dir / candidate

    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"{path.name}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            _apply_key(config, key, value, resolve)
        except ValidationError:
            raise
        except Exception as exc:
            raise ValidationError(f"{path.name}:{lineno}: bad value for {key!r}: {exc}")
    return config


def _apply_key(config: Config, key: str, value: str, resolve):
    if key == "base_namespace":
        config.base_namespace = value
    elif key == "listen":
        host, _, port = value.rpartition(":")
        config.host = host or "127.0.0.1"
        config.port = int(port)
    elif key == "data_dir":
        config.data_dir = resolve(value)
    elif key == "kb_concepts":
        config.kb_concepts = resolve(value)
    elif key == "kb_relations":
        config.kb_relations = resolve(value)
    elif key == "expansion_depth":
        config.expansion_depth = int(value)
    elif key == "fetch_timeout":
        config.fetch_timeout = float(value)
    elif key.startswith("reliability."):
        source_type = SourceType.parse(key.split(".", 1)[1])
        rating = float(value)
        if not 0.0 <= rating <= 1.0:
            raise ValidationError(f"reliability must be in [0,1], got {rating}")
        config.reliability[source_type] = rating
    elif key.startswith("source."):
        name = key.split(".", 1)[1]
        parts = value.split()
        if len(parts) not in (2, 3) or parts[0] not in (FIXTURE, REMOTE):
            raise ValidationError(
                f"source {name!r} must be '(fixture|remote) <target> [disabled]'"
            )
        enabled = True
        if len(parts) == 3:
            if parts[2] != "disabled":
                raise ValidationError(f"source {name!r}: unknown flag {parts[2]!r}")
            enabled = False
        target = parts[1]
        if parts[0] == FIXTURE:
            target = str(resolve(target))
        config.sources.append(LodSource(name, parts[0], target, enabled))
    else:
        raise ValidationError(f"unknown config key {key!r}")
