"""Declarative configuration: one nestable key-value file.

Environment variables override credentials only. Auth tokens map to roles
either inline (auth.tokens) or via named environment variables
(auth.token_env), so secrets never need to live in the file.
"""
from __future__ import annotations

import os
from pathlib import Path

import yaml


class ConfigError(Exception):
    pass


DEFAULTS = {
    "data_dir": "data",
    "registry_dir": None,  # shipped registry
    "host": "127.0.0.1",
    "port": 8600,
    "auth": {"tokens": {}, "token_env": {}},
}

ROLES = {"Admin", "Expert", "Reader"}


def load_config(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"missing config file: {path}")
    raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    config = {**DEFAULTS, **raw}
    config["auth"] = {**DEFAULTS["auth"], **(raw.get("auth") or {})}

    tokens: dict[str, str] = dict(config["auth"].get("tokens") or {})
    for env_name, role in (config["auth"].get("token_env") or {}).items():
        value = os.environ.get(env_name)
        if value:
            tokens[value] = role
    for role in tokens.values():
        if role not in ROLES:
            raise ConfigError(f"unknown role {role!r} (choose from {sorted(ROLES)})")
    config["auth"]["resolved_tokens"] = tokens

    base = path.parent
    for key in ("data_dir", "registry_dir"):
        value = config.get(key)
        if value and not Path(value).is_absolute():
            config[key] = str(base / value)
    return config


def load_adapter_config(path: str | Path) -> tuple[dict, Path]:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"missing adapter config: {path}")
    return yaml.safe_load(path.read_text(encoding="utf-8")) or {}, path.parent
