"""TOML configuration for the command-line tool.

Example::

    corpus_path = "songs.jsonl"
    dictionary_path = "cmudict.dict"
    seed = 13
    jobs = 4
    pooled = false

    [backends.embed]
    kind = "remote"
    endpoint = "http://localhost:8000"
    api_key_env = "LYR_EMBED_KEY"

    [backends.translate]
    kind = "stub"

API keys are read only from the environment variable named in the file.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .semantics import (
    HashingCoherenceScorer,
    HashingEmbedding,
    IdentityTranslation,
    RemoteCoherenceScorer,
    RemoteEmbedding,
    RemoteTranslation,
)

SERVICES = ("embed", "translate", "nsp")
DEFAULT_KEY_ENV = {"embed": "LYR_EMBED_KEY", "translate": "LYR_TRANSLATE_KEY", "nsp": "LYR_NSP_KEY"}


class ConfigError(ValueError):
    pass


@dataclass
class BackendConfig:
    kind: str = "stub"
    endpoint: str | None = None
    api_key_env: str | None = None

    def check(self, service: str) -> None:
        if self.kind not in ("stub", "remote"):
            raise ConfigError(f"backends.{service}.kind must be 'stub' or 'remote', got {self.kind!r}")
        if self.kind == "remote" and not self.endpoint:
            raise ConfigError(f"backends.{service}: remote backend requires an endpoint")


@dataclass
class Config:
    corpus_path: str | None = None
    dictionary_path: str | None = None
    jamo_table_path: str | None = None
    seed: int = 0
    jobs: int = 1
    pooled: bool = False
    official_only: bool = False
    outputs: dict[str, str] = field(default_factory=dict)
    backends: dict[str, BackendConfig] = field(
        default_factory=lambda: {s: BackendConfig(api_key_env=DEFAULT_KEY_ENV[s]) for s in SERVICES}
    )

    def check(self) -> None:
        for service, backend in self.backends.items():
            backend.check(service)
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")

    def build_backend(self, service: str):
        backend = self.backends[service]
        backend.check(service)
        if backend.kind == "stub":
            return {"embed": HashingEmbedding, "translate": IdentityTranslation, "nsp": HashingCoherenceScorer}[
                service
            ]()
        cls = {"embed": RemoteEmbedding, "translate": RemoteTranslation, "nsp": RemoteCoherenceScorer}[service]
        return cls(backend.endpoint, api_key_env=backend.api_key_env or DEFAULT_KEY_ENV[service])


_SCALARS = {
    "corpus_path": str,
    "dictionary_path": str,
    "jamo_table_path": str,
    "seed": int,
    "jobs": int,
    "pooled": bool,
    "official_only": bool,
}


def load_config(path: str | Path | None) -> Config:
    config = Config()
    if path is None:
        return config
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid config {path}: {exc}") from exc

    for key, value in data.items():
        if key in _SCALARS:
            expected = _SCALARS[key]
            if not isinstance(value, expected) or (expected is int and isinstance(value, bool)):
                raise ConfigError(f"{key} must be {expected.__name__}")
            setattr(config, key, value)
        elif key == "output":
            if not isinstance(value, dict):
                raise ConfigError("[output] must be a table")
            config.outputs = {k: str(v) for k, v in value.items()}
        elif key == "backends":
            for service, table in value.items():
                if service not in SERVICES:
                    raise ConfigError(f"unknown backend service {service!r}")
                if "api_key" in table:
                    raise ConfigError("API keys are not accepted in config; name an environment variable via api_key_env")
                config.backends[service] = BackendConfig(
                    kind=table.get("kind", "stub"),
                    endpoint=table.get("endpoint"),
                    api_key_env=table.get("api_key_env", DEFAULT_KEY_ENV[service]),
                )
        else:
            raise ConfigError(f"unknown config key {key!r}")
    config.check()
    return config
