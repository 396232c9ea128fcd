import io
import os
from pathlib import Path

from dotenv.parser import parse_stream
from pydantic import ValidationError
from pydantic_settings import BaseSettings

from trslab.models import RunConfig
from trslab.services.field_service import split_prime_power


class Settings(BaseSettings):
    workers: int = os.cpu_count() or 1
    subset_budget: int = 10**7
    coset_budget: int = 10**7
    codeword_budget: int = 10**7
    sample_count: int = 10_000
    seed: int = 0
    log_level: str = "INFO"

    base_dir: Path = Path(__file__).resolve().parent.parent
    data_dir: Path = base_dir / "data"

    model_config = {"env_file": ".env", "env_file_encoding": "utf-8", "env_prefix": "TRS_", "extra": "ignore"}


settings = Settings()


class ConfigError(ValueError):
    """Run-config problem; names the line or key at fault."""


# Keys whose value is a comma-separated list; "all" means the full range.
_LIST_KEYS = {"checks", "k", "l", "eta", "evaluation"}
_ALL_KEYS = {"k", "l"}


def _coerce(key: str, raw: str):
    value = raw.strip()
    if key in _LIST_KEYS:
        if key in _ALL_KEYS and value.lower() == "all":
            return None
        return [item.strip() for item in value.split(",") if item.strip()]
    if value == "" and key in {"output", "csv", "workers"}:
        return None
    return value


def parse_config(text: str) -> RunConfig:
    values: dict = {}
    for binding in parse_stream(io.StringIO(text)):
        line = binding.original.line
        if binding.error:
            raise ConfigError(f"line {line}: cannot parse {binding.original.string.strip()!r}")
        if binding.key is None:
            continue  # blank line or comment
        key = binding.key.strip().lower()
        if key not in RunConfig.model_fields and key != "q":
            raise ConfigError(f"line {line}: unknown key {key!r}")
        if binding.value is None:
            raise ConfigError(f"line {line}: key {key!r} has no value")
        values[key] = _coerce(key, binding.value)

    if "q" in values:
        try:
            values["p"], values["m"] = split_prime_power(int(values.pop("q")))
        except ValueError as e:
            raise ConfigError(f"invalid value for q: {e}") from e
    for key in ("subset_budget", "coset_budget", "codeword_budget", "sample_count", "seed"):
        values.setdefault(key, getattr(settings, key))

    try:
        config = RunConfig.model_validate(values)
    except ValidationError as e:
        keys = sorted({str(err["loc"][0]) for err in e.errors() if err["loc"]})
        raise ConfigError(f"invalid value for {', '.join(keys) or 'config'}: {e.errors()[0]['msg']}") from e

    env_workers = os.environ.get("TRS_WORKERS")
    if env_workers:
        config = config.model_copy(update={"workers": int(env_workers)})
    elif config.workers is None:
        config = config.model_copy(update={"workers": settings.workers})
    return config


def load_config(path: str | Path) -> RunConfig:
    """Read a key-value run config; defaults come from ``settings``."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Config not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"))


def dump_config(config: RunConfig) -> str:
    lines = []
    for key, value in config.model_dump().items():
        if value is None:
            value = "all" if key in _ALL_KEYS else ""
        elif isinstance(value, list):
            value = ",".join(str(v) for v in value)
        lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"
