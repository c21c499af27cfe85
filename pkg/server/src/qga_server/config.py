"""Server configuration file handling."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass


class ConfigError(ValueError):
    pass


@dataclass
class ServerConfig:
    qg: str
    qa: str
    device: str = "cpu"
    max_batch_size: int = 16
    host: str = "127.0.0.1"
    port: int = 8000

    @classmethod
    def from_file(cls, path: str) -> "ServerConfig":
        """Load a JSON config; relative checkpoint paths resolve against it."""
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot load config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must be a JSON object")

        known = {"qg", "qa", "device", "max_batch_size", "host", "port"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"config {path} has unknown keys: {', '.join(sorted(unknown))}")
        missing = [k for k in ("qg", "qa") if k not in data]
        if missing:
            raise ConfigError(f"config {path} missing keys: {', '.join(missing)}")

        base = os.path.dirname(os.path.abspath(path))

        def resolve(spec: str) -> str:
            if spec == "stub" or os.path.isabs(spec):
                return spec
            return os.path.normpath(os.path.join(base, spec))

        max_batch = data.get("max_batch_size", 16)
        if not isinstance(max_batch, int) or isinstance(max_batch, bool) or max_batch < 1:
            raise ConfigError(f"config {path}: max_batch_size must be a positive integer")

        return cls(
            qg=resolve(data["qg"]),
            qa=resolve(data["qa"]),
            device=data.get("device", "cpu"),
            max_batch_size=max_batch,
            host=data.get("host", "127.0.0.1"),
            port=int(data.get("port", 8000)),
        )
