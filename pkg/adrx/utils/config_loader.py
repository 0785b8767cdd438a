"""
Experiment configuration loading

Config files are flat ``key=value`` files with dotted section names::

    channel.k1=40
    sim.dt=1e-5
    experiment.sweep.k1=2,20,40,inf

Parsing is done by python-dotenv, validation by the pydantic models.
"""

import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from dotenv import dotenv_values
from loguru import logger
from pydantic import ValidationError

from ..config import settings
from ..models import ExperimentConfig, RunMode

# Defaults follow the adsorption-sweep geometry; channel.k1 has none
_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "channel": {"D": 8.0, "r0": 11.0, "rr": 10.0, "km1": 5.0, "ntx": 1000},
    "sim": {"dt": 1e-5, "ts": 0.002, "t_end": 0.1, "seed": 0},
    "quad": {},
    "experiment": {},
}

_KNOWN_KEYS = {
    "channel": {"D", "r0", "rr", "k1", "km1", "ntx"},
    "sim": {"dt", "ts", "t_end", "trials", "seed", "emission"},
    "quad": {"w_max", "rel_tol", "max_panels", "talbot_terms"},
    "experiment": {"mode", "output_path", "sweep.k1", "sweep.km1"},
}

_LINE = re.compile(r"^\s*(export\s+)?[A-Za-z_][A-Za-z0-9_.]*\s*=")


class ConfigParseError(Exception):
    """Custom exception for unreadable or malformed config files"""
    pass


class ConfigValidationError(Exception):
    """Custom exception for config values that break model invariants"""

    def __init__(self, message: str, fields: Optional[List[str]] = None):
        super().__init__(message)
        self.fields = fields or []


def _format_validation_error(exc: ValidationError) -> ConfigValidationError:
    fields, parts = [], []
    for error in exc.errors():
        field = ".".join(str(p) for p in error["loc"]) or "experiment"
        fields.append(field)
        parts.append(f"{field}: {error['msg']}")
    return ConfigValidationError("; ".join(parts), fields)


def _check_syntax(text: str, path: Path) -> None:
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if not _LINE.match(line):
            raise ConfigParseError(f"{path}:{number}: expected 'key=value', got {stripped!r}")


def _parse_sweep(key: str, raw: str) -> List[float]:
    values = []
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            values.append(float(item))
        except ValueError:
            raise ConfigValidationError(f"{key}: {item!r} is not a number", [key])
    if not values:
        raise ConfigValidationError(f"{key}: no values given", [key])
    return values


def config_from_mapping(values: Dict[str, Optional[str]]) -> ExperimentConfig:
    """Validate a flat dotted mapping into an ExperimentConfig."""
    sections: Dict[str, Dict[str, Any]] = {name: dict(d) for name, d in _DEFAULTS.items()}
    sections["sim"].setdefault("trials", settings.default_trials)
    sweep = []
    unknown = []

    for key, raw in values.items():
        section, _, field = key.partition(".")
        if section not in _KNOWN_KEYS or field not in _KNOWN_KEYS[section]:
            unknown.append(key)
            continue
        if raw is None:
            raise ConfigParseError(f"{key}: missing value")
        if field.startswith("sweep."):
            parameter = field.split(".", 1)[1]
            sweep.append({"parameter": parameter, "values": _parse_sweep(key, raw)})
        else:
            sections[section][field] = raw.strip()

    if unknown:
        raise ConfigValidationError(f"unknown keys: {', '.join(sorted(unknown))}", unknown)

    experiment = sections.pop("experiment")
    payload = {
        "channel": sections["channel"],
        "sim": sections["sim"],
        "quad": sections["quad"],
        "sweep": sweep,
        **experiment,
    }
    try:
        return ExperimentConfig.model_validate(payload)
    except ValidationError as e:
        raise _format_validation_error(e)


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read and validate an experiment config file."""
    path = Path(path)
    if not path.is_file():
        raise ConfigParseError(f"config file not found: {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigParseError(f"cannot read {path}: {e}")

    _check_syntax(text, path)
    cfg = config_from_mapping(dotenv_values(path))
    logger.info(
        f"Loaded config {path}: mode={cfg.mode.value}, k1={cfg.channel.k1}, km1={cfg.channel.km1}, "
        f"variants={len(cfg.variants())}, trials={cfg.sim.trials}"
    )
    return cfg


def apply_overrides(
    cfg: ExperimentConfig,
    seed: Optional[int] = None,
    trials: Optional[int] = None,
    mode: Optional[Union[str, RunMode]] = None,
    output_path: Optional[str] = None,
) -> ExperimentConfig:
    """Command-line overrides, re-validated."""
    data = cfg.model_dump()
    if seed is not None:
        data["sim"]["seed"] = seed
    if trials is not None:
        data["sim"]["trials"] = trials
    if mode is not None:
        data["mode"] = mode
    if output_path is not None:
        data["output_path"] = output_path
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise _format_validation_error(e)
