"""Runtime configuration shared by the CLI and the service.

Precedence, lowest to highest: built-in defaults, ``--config`` JSON file,
``LABANIMATE_*`` environment variables, command-line flags.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .engine import EngineConfig
from .semantics import RampParams

ENV_VARS = {
    "listen": "LABANIMATE_LISTEN",
    "library": "LABANIMATE_LIBRARY",
    "embeddings": "LABANIMATE_EMBEDDINGS",
    "codebook": "LABANIMATE_CODEBOOK",
    "profile": "LABANIMATE_PROFILE",
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ServiceConfig:
    listen: str = "127.0.0.1:8080"
    library: str | None = None
    embeddings: str | None = None
    codebook: str | None = None
    profile: str = "full"
    profiles: dict[str, str] = field(default_factory=dict)
    seconds_per_beat: float = 0.5
    match_threshold: float = 0.5
    tau0: float = 0.3
    tau1: float = 0.7
    seed: int = 0

    @property
    def host_port(self) -> tuple[str, int]:
        host, _, port = self.listen.rpartition(":")
        try:
            return host or "127.0.0.1", int(port)
        except ValueError:
            raise ConfigError(f"bad listen address {self.listen!r}, expected host:port") from None

    def engine_config(self) -> EngineConfig:
        try:
            return EngineConfig(
                match_threshold=self.match_threshold,
                ramp=RampParams(self.tau0, self.tau1),
                seed=self.seed,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def merged(self, **overrides) -> "ServiceConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def _from_file(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    engine = data.pop("engine", {}) or {}
    data.update(engine)
    known = {f.name for f in fields(ServiceConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{path}: unknown config keys {sorted(unknown)}")
    return data


def load_config(path: str | Path | None = None, env=None, **overrides) -> ServiceConfig:
    env = os.environ if env is None else env
    cfg = ServiceConfig()
    if path:
        cfg = replace(cfg, **_from_file(path))
    cfg = cfg.merged(**{k: env.get(var) for k, var in ENV_VARS.items()})
    return cfg.merged(**overrides)
