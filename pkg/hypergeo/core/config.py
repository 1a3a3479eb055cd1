import os
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from hypergeo.core.errors import ConfigError

# Cache (por proceso): env y YAML se leen una sola vez
_SETTINGS: Optional["Settings"] = None

ENV_KEYS = {
    "HYPERGEO_DIGITS": "default_digits",
    "HYPERGEO_GUARD_DIGITS": "guard_digits",
    "HYPERGEO_INNER_RADIUS": "inner_radius",
    "HYPERGEO_OUTER_RADIUS": "outer_radius",
    "HYPERGEO_MAX_TAYLOR_TERMS": "max_taylor_terms",
    "HYPERGEO_BENCH_JOBS": "bench_jobs",
    "HYPERGEO_LOG_LEVEL": "log_level",
}


class Settings(BaseModel):
    default_digits: int = Field(default=30, ge=1)
    guard_digits: int = Field(default=10, ge=0)
    inner_radius: float = Field(default=0.9, gt=0)
    outer_radius: float = Field(default=1.1, gt=1)
    max_taylor_terms: int = Field(default=100000, ge=1)
    bench_jobs: int = Field(default=1, ge=1)
    log_level: str = "WARNING"


def _load_yaml_file(path: str) -> Dict[str, Any]:
    """
    Optional settings file, same keys as the environment.
    Example (env.yaml):
      HYPERGEO_DIGITS: "50"
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except OSError as exc:
        raise ConfigError(f"Cannot read settings file: {path}", details={"path": path}) from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"Malformed settings file: {path}", details={"path": path}) from exc

    if not isinstance(data, dict):
        raise ConfigError("Settings file must be a mapping", details={"path": path})
    return {str(k): v for k, v in data.items()}


def _collect_raw() -> Dict[str, Any]:
    load_dotenv()

    raw: Dict[str, Any] = {}
    config_path = (os.getenv("HYPERGEO_CONFIG", "") or "").strip()
    if config_path:
        raw.update(_load_yaml_file(config_path))

    for key in ENV_KEYS:
        value = (os.getenv(key, "") or "").strip()
        if value:
            raw[key] = value
    return raw


def load_settings() -> Settings:
    raw = _collect_raw()
    fields = {ENV_KEYS[k]: v for k, v in raw.items() if k in ENV_KEYS}
    try:
        return Settings(**fields)
    except ValidationError as exc:
        bad = sorted({k for k, f in ENV_KEYS.items() for e in exc.errors() if f in e.get("loc", ())})
        raise ConfigError("Invalid settings", details={"keys": bad}) from exc


def get_settings() -> Settings:
    global _SETTINGS
    if _SETTINGS is None:
        _SETTINGS = load_settings()
    return _SETTINGS


def reset_settings() -> None:
    global _SETTINGS
    _SETTINGS = None
