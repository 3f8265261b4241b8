"""
Pydantic schemas for command-line runs
"""
import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from gsws.core.exceptions import ValidationError
from gsws.schemas.potential import PotentialParams


class Command(str, Enum):
    """Command-line subcommands"""
    POTENTIAL = "potential"
    SCATTER = "scatter"
    BOUND = "bound"
    QUASIBOUND = "quasibound"
    RESONANCES = "resonances"
    VERIFY = "verify"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


# Reference parameter set used when nothing is given (surface barrier 22.5 MeV)
PARAM_DEFAULTS: Dict[str, float] = {"v0": 100.0, "w0": 250.0, "a": 1.0, "L": 6.0}

COMMAND_DEFAULTS: Dict[Command, Dict[str, Any]] = {
    Command.POTENTIAL: {"x_min": -15.0, "x_max": 15.0, "samples": 301, "mws": []},
    Command.SCATTER: {"axis": "energy", "min": 0.1, "max": 80.0, "steps": 500, "energy": None, "workers": None},
    Command.BOUND: {"parity": "both", "dump_wavefunctions": False, "x_samples": 401, "normalize": False},
    Command.QUASIBOUND: {
        "parity": "both",
        "dump_wavefunctions": False,
        "x_samples": 401,
        "window_min": 0.5,
        "window_max": 60.0,
    },
    Command.RESONANCES: {"min": 0.0, "max": 60.0},
    Command.VERIFY: {"corrupt_theta_branch": False, "quick": False},
}

# keys of a config file (and of the command line) that describe the potential
PARAM_KEYS = {"v0": "v0", "w0": "w0", "a": "a", "L": "L", "mass": "mc2", "hbarc": "hbarc"}
GLOBAL_KEYS = {"format", "out", "scheme"}


class RunConfig(BaseModel):
    """Fully resolved configuration of one command-line run"""
    command: Command
    params: PotentialParams
    output_format: OutputFormat = OutputFormat.CSV
    output_path: Optional[Path] = None
    scheme: str = Field(default="asymptotic", pattern="^(asymptotic|exact)$")
    options: Dict[str, Any] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True)

    def echo(self) -> Dict[str, Any]:
        """JSON-safe description echoed at the top of every output"""
        return {
            "command": self.command.value,
            "params": self.params.model_dump(),
            "scheme": self.scheme,
            "options": self.options,
        }


def load_config_file(path: Path) -> Dict[str, Any]:
    """
    Read a JSON config file of flat keys (v0, w0, a, L, mass, hbarc, format,
    out, scheme and any command option).

    Raises:
        ValidationError: If the file is missing or not a JSON object
    """
    try:
        content = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError(f"Cannot read config file {path}: {e}")
    if not isinstance(content, dict):
        raise ValidationError(f"Config file {path} must contain a JSON object")
    return content


def resolve_run_config(
    command: Command,
    cli: Dict[str, Any],
    file_values: Optional[Dict[str, Any]] = None,
) -> RunConfig:
    """
    Merge command-line values over config-file values over built-in defaults.

    ``cli`` holds None for every flag that was not given.
    """
    file_values = file_values or {}
    known = set(PARAM_KEYS) | GLOBAL_KEYS | set(COMMAND_DEFAULTS[command])
    unknown = sorted(set(file_values) - known)
    if unknown:
        raise ValidationError(
            f"Unknown config keys for '{command.value}': {', '.join(unknown)}",
            details={"unknown": unknown},
        )

    def pick(key: str, default: Any) -> Any:
        if cli.get(key) is not None:
            return cli[key]
        if file_values.get(key) is not None:
            return file_values[key]
        return default

    param_values = {}
    for key, field_name in PARAM_KEYS.items():
        value = pick(key, PARAM_DEFAULTS.get(key))
        if value is not None:
            param_values[field_name] = value

    options = {key: pick(key, default) for key, default in COMMAND_DEFAULTS[command].items()}
    out = pick("out", None)
    return RunConfig(
        command=command,
        params=PotentialParams(**param_values),
        output_format=OutputFormat(pick("format", OutputFormat.CSV.value)),
        output_path=Path(out) if out is not None else None,
        scheme=pick("scheme", "asymptotic"),
        options=options,
    )
