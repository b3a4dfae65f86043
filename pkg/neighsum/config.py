"""
Runtime configuration

Defaults for the counting worker pool, the dense/sparse switch of exact elimination,
the largest operator the CLI hands to elimination, and the float prefilter tolerance.
A JSON file can override any key; NEIGHSUM_* environment variables override the file.
"""

import json
import os
from copy import deepcopy
from typing import Any, Dict, Optional

from .errors import ConfigError

DEFAULT_CONFIG = {
    "threads": 1,
    # Bareiss on a dense copy up to this many columns, sparse row elimination beyond
    "denseLimit": 144,
    "kernelCellLimit": 4096,
    # must stay far above the rounding error of a product of <= 6 factors of size <= 3
    "prefilterTolerance": 1e-6,
    "format": "json",
}

ENV_OVERRIDES = {
    "NEIGHSUM_THREADS": "threads",
    "NEIGHSUM_DENSE_LIMIT": "denseLimit",
}

FORMATS = ("json", "csv", "ascii")


def default_config():
    return deepcopy(DEFAULT_CONFIG)


def validate_config(config: Dict[str, Any]) -> Dict[str, Any]:
    errors = []
    for key in ("threads", "denseLimit", "kernelCellLimit"):
        value = config.get(key)
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            errors.append(f"'{key}' must be a positive integer, got {value!r}")
    tolerance = config.get("prefilterTolerance")
    if not isinstance(tolerance, (int, float)) or not (1e-9 < tolerance < 1e-2):
        errors.append(f"'prefilterTolerance' must lie in (1e-9, 1e-2), got {tolerance!r}")
    if config.get("format") not in FORMATS:
        errors.append(f"'format' must be one of {', '.join(FORMATS)}")
    if errors:
        raise ConfigError("; ".join(errors))
    return config


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """Load defaults, merge a JSON config file over them, then apply the environment."""
    config = default_config()
    if path:
        try:
            with open(path, encoding="utf-8") as f:
                overrides = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Could not read config {path}: {e}") from e
        if not isinstance(overrides, dict):
            raise ConfigError(f"Config {path} must contain a JSON object")
        unknown = set(overrides) - set(DEFAULT_CONFIG)
        if unknown:
            raise ConfigError(
                f"Unexpected keys in {path}: {', '.join(sorted(unknown))}. "
                f"Only {sorted(DEFAULT_CONFIG)} are allowed."
            )
        config.update(overrides)
    return validate_config(apply_env(config))


def apply_env(config: Dict[str, Any], environ: Optional[Dict[str, str]] = None) -> Dict[str, Any]:
    environ = os.environ if environ is None else environ
    for var, key in ENV_OVERRIDES.items():
        raw = environ.get(var)
        if raw is None or raw.strip() == "":
            continue
        try:
            config[key] = int(raw)
        except ValueError as e:
            raise ConfigError(f"{var} must be an integer, got {raw!r}") from e
    return config
