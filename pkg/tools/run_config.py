"""
Construcción de la RunConfig a partir de los flags y de un fichero --config
(sintaxis dotenv). Las claves del fichero pisan a los flags.
"""

import argparse
import random
from pathlib import Path
from typing import Any

from dotenv import dotenv_values

from models.exceptions import UsageError
from models.run_models import LLMSettings, RunConfig

TRUE_VALUES = {"1", "true", "yes", "on"}

# clave del fichero → (sección, campo)
CONFIG_KEYS = {
    "SEED": ("run", "seed"),
    "FORMAT": ("run", "format"),
    "OUTPUT": ("run", "output"),
    "MANIFEST": ("run", "manifest"),
    "SHUFFLE": ("run", "shuffle"),
    "LLM_PROVIDER": ("llm", "provider"),
    "LLM_MODEL": ("llm", "model"),
    "LLM_BASE_URL": ("llm", "base_url"),
    "LLM_API_KEY_ENV": ("llm", "key_env"),
    "LLM_MAX_REQUESTS": ("llm", "budget"),
    "LLM_RETRY_LIMIT": ("llm", "retry_limit"),
}


def read_config_file(path: str | Path) -> dict[str, str]:
    if not Path(path).is_file():
        raise UsageError(f"no existe el fichero de configuración {path}")
    return {k: v for k, v in dotenv_values(path).items() if v is not None}


def _as_list(value) -> list[str]:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return [str(v) for v in value]
    return [str(value)]


def build_run_config(args: argparse.Namespace) -> RunConfig:
    run: dict[str, Any] = {
        "command": args.command,
        "seed": getattr(args, "seed", None),
        "inputs": _as_list(getattr(args, "inputs", None)),
        "output": getattr(args, "output", None),
        "format": getattr(args, "format", None),
        "manifest": getattr(args, "manifest", None),
        "shuffle": getattr(args, "shuffle", False),
    }
    llm: dict[str, Any] = {
        key: value
        for key, value in {
            "provider": getattr(args, "provider", None),
            "model": getattr(args, "model", None),
            "base_url": getattr(args, "base_url", None),
            "key_env": getattr(args, "key_env", None),
            "budget": getattr(args, "budget", None),
            "retry_limit": getattr(args, "retry_limit", None),
        }.items()
        if value is not None
    }

    if getattr(args, "config", None):
        for key, value in read_config_file(args.config).items():
            if key not in CONFIG_KEYS:
                continue
            section, field = CONFIG_KEYS[key]
            if field == "shuffle":
                value = value.strip().lower() in TRUE_VALUES
            (run if section == "run" else llm)[field] = value

    return RunConfig(**run, llm=LLMSettings(**llm))


def resolve_format(run: RunConfig, allowed: tuple[str, ...], default: str) -> str:
    fmt = run.format or default
    if fmt not in allowed:
        raise UsageError(f"--format {fmt} no válido para {run.command} (usa {' | '.join(allowed)})")
    return fmt


def shuffled(records: list, run: RunConfig) -> list:
    """Permuta la salida con la semilla si se pidió --shuffle."""
    if not run.shuffle:
        return records
    records = list(records)
    random.Random(run.seed).shuffle(records)
    return records
