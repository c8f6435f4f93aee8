import logging
import os
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional, Tuple

from dotenv import dotenv_values, load_dotenv
from pydantic import ConfigDict, Field, field_validator, model_validator

from pselect.core.base import BaseOutput
from pselect.harness.output import DISTS

logger = logging.getLogger(__name__)

ENV_KEYS = {
    "threads": "PSELECT_THREADS",
    "seed": "PSELECT_SEED",
    "log_level": "PSELECT_LOG_LEVEL",
}


class RunConfig(BaseOutput):
    """
    Settings of one CLI invocation, merged from the environment, an optional
    key=value config file and the command-line flags (in that order).
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True, extra="forbid")

    command: Literal["infer", "simulate", "manymeans", "report"] = Field(...)

    # infer
    data: Optional[Path] = Field(default=None)
    response: str = Field(default="-1")
    header: Optional[bool] = Field(default=None)
    normalize: bool = Field(default=False)
    method: Literal["fs", "lar"] = Field(default="lar")
    k: Optional[int] = Field(default=None, ge=1)
    sigma_mode: Literal["known", "plugin", "bootstrap"] = Field(default="known")
    sigma: float = Field(default=1.0, gt=0.0)

    # pivots
    alpha: float = Field(default=0.1, gt=0.0, lt=1.0)
    # None takes the family preset in simulate and DEFAULT_B in infer
    B: Optional[int] = Field(default=None, ge=1)
    gamma: float = Field(default=1e-4, gt=0.0)
    c: float = Field(default=1.0, ge=1.0)

    # simulate / manymeans
    experiment: Optional[Literal["null", "signal", "hetero", "highdim"]] = Field(default=None)
    dists: Tuple[str, ...] = Field(default=DISTS)
    reps: int = Field(default=500, ge=1)
    n: int = Field(default=50, ge=2)
    d: Optional[int] = Field(default=None, ge=1)
    m: Optional[int] = Field(default=None, ge=1)
    signal: Optional[bool] = Field(default=None)
    design_seed: Optional[int] = Field(default=None, ge=0)

    # report / summaries
    support: Tuple[int, ...] = Field(default=())
    screen: bool = Field(default=False)

    seed: int = Field(default=0, ge=0)
    threads: Optional[int] = Field(default=None, ge=1)
    out: Path = Field(default=Path("pselect_out"))
    log_level: str = Field(default="INFO")

    @field_validator("dists", "support", mode="before")
    @classmethod
    def _split(cls, value):
        if isinstance(value, str):
            return tuple(v.strip() for v in value.split(",") if v.strip())
        return value

    @field_validator("log_level")
    @classmethod
    def _check_level(cls, value: str) -> str:
        level = value.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value}.")
        return level

    @model_validator(mode="after")
    def _check_command(self):
        if self.command == "infer" and self.data is None:
            raise ValueError("infer needs a dataset path.")
        if self.command == "simulate":
            if self.experiment is None:
                raise ValueError("simulate needs an experiment family.")
            bad = [f for f in self.dists if f not in DISTS]
            if bad:
                raise ValueError(f"unknown error distributions {bad}; choose from {list(DISTS)}.")
        if self.command == "manymeans":
            if self.d is None or self.m is None:
                raise ValueError("manymeans needs --d and --m.")
            if self.d < 2:
                raise ValueError("manymeans needs d >= 2 groups.")
        return self


def env_layer(env: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    """
    PSELECT_* variables, after loading a .env file from the working directory.
    """
    if env is None:
        load_dotenv()
        env = os.environ
    return {key: env[name] for key, name in ENV_KEYS.items() if env.get(name) not in (None, "")}


def file_layer(path: Optional[Path]) -> Dict[str, Any]:
    """Flat key=value file; keys match the long flag names (dashes or underscores)."""
    if path is None:
        return {}
    if not Path(path).is_file():
        raise FileNotFoundError(f"config file {path} not found.")
    values = dotenv_values(path)
    return {k.strip().lower().replace("-", "_"): v for k, v in values.items() if v is not None}


def build_run_config(
    command: str,
    flags: Mapping[str, Any],
    config_path: Optional[Path] = None,
    env: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """
    Merge the configuration layers; later layers win.

    Args:
        command (str): CLI command
        flags (Mapping[str, Any]): explicit flags, None for unset
        config_path (Optional[Path], optional): key=value file. Defaults to None.
        env (Optional[Mapping[str, str]], optional): environment to read instead of
            os.environ (no .env loading). Defaults to None.

    Returns:
        cfg (RunConfig): validated configuration.
    """
    merged: Dict[str, Any] = {}
    merged.update(env_layer(env))
    merged.update(file_layer(config_path))
    merged.update({k: v for k, v in flags.items() if v is not None})
    merged["command"] = command
    logger.debug("run configuration: %s", merged)
    return RunConfig(**merged)
