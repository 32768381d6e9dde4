"""
Key-value config files (``KEY=value`` lines, ``#`` comments) read with
python-dotenv. Keys mirror the long command-line flags.
"""
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union
import logging

from dotenv import dotenv_values

from app.errors import ParameterError
from app.models.sampler_models import ALGORITHM_PARAMETERS, Algorithm, SamplerSpec
from app.sampler_manager import build_spec

logger = logging.getLogger(__name__)

CONFIG_KEYS = (
    "alg", "c", "mass", "n", "rounds", "jumps", "eps", "partitions", "partition", "paths", "grid",
    "seed", "out", "format", "workers", "base_cdf", "algorithms", "m",
)

# config key -> SamplerSpec field
_SPEC_KEYS = {
    "alg": "algorithm",
    "n": "n",
    "rounds": "rounds",
    "jumps": "jumps",
    "eps": "epsilon",
    "partitions": "partitions",
    "partition": "partition",
}


def load_config_file(path: Optional[Union[str, Path]]) -> Dict[str, str]:
    """
    Reads a config file into a dict of non-empty values with normalised keys.

    Raises:
        ParameterError: the file is missing or has unknown keys.
    """
    if path is None:
        return {}
    path = Path(path)
    if not path.is_file():
        raise ParameterError(f"config file {path} not found")
    raw = dotenv_values(path)
    values = {key.strip().lower().replace("-", "_"): value for key, value in raw.items() if value not in (None, "")}
    unknown = sorted(set(values) - set(CONFIG_KEYS))
    if unknown:
        raise ParameterError(f"unknown key(s) in {path}: {', '.join(unknown)}")
    logger.debug(f"loaded {len(values)} setting(s) from {path}")
    return values


def parse_floats(text: str, name: str) -> Tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ParameterError(f"{name} must be a comma-separated list of numbers, got {text!r}") from None


def spec_to_config(spec: SamplerSpec) -> Dict[str, str]:
    """Config entries that describe ``spec``; unset fields are omitted."""
    entries = {}
    for key, field in _SPEC_KEYS.items():
        value = getattr(spec, field)
        if value is None:
            continue
        if field == "algorithm":
            value = value.value
        elif field == "partition":
            value = ",".join(repr(float(v)) for v in value)
        else:
            value = repr(value)
        entries[key] = value
    return entries


def spec_from_config(values: Mapping[str, Any], defaults: Optional[Mapping[str, Any]] = None) -> SamplerSpec:
    """
    SamplerSpec from config entries; inverse of spec_to_config.

    Values may be raw strings from a file or typed command-line values.
    ``defaults`` holds SamplerSpec fields for the keys ``values`` leaves
    unset. Parameters the chosen algorithm does not take are dropped.
    """
    fields = dict(defaults or {})
    for key, field in _SPEC_KEYS.items():
        raw = values.get(key)
        if raw is None or raw == "":
            continue
        if field == "partition" and isinstance(raw, str):
            fields[field] = parse_floats(raw, key)
        else:
            fields[field] = raw
    algorithm = _algorithm_of(fields.get("algorithm"))
    if algorithm is not None:
        taken = ALGORITHM_PARAMETERS[algorithm]
        fields = {k: v for k, v in fields.items() if k in taken}
        fields["algorithm"] = algorithm
    return build_spec(**fields)


def _algorithm_of(value: Any) -> Optional[Algorithm]:
    try:
        return Algorithm(value.lower() if isinstance(value, str) else value)
    except ValueError:
        # build_spec reports it
        return None


def dump_config(values: Mapping[str, str]) -> str:
    return "".join(f"{key}={value}\n" for key, value in values.items())
