"""Service and CLI configuration: TOML file plus environment overrides.

Settings, in increasing priority: built-in defaults, the config file
(``packit.toml`` in the working directory unless a path is given), then
the environment variables PACKIT_PORT and PACKIT_SOLVER. The solver
override is handled inside the solver harness itself so that every call
site honors it; it is surfaced here only for display.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import tomli

from .errors import FormatError

DEFAULT_CONFIG_NAME = "packit.toml"
_KNOWN_KEYS = {"port", "solver_path", "default_budget", "session_dir"}


@dataclass(frozen=True)
class Config:
    port: int = 8642
    solver_path: Optional[str] = None
    default_budget: float = 60.0
    session_dir: Path = Path.home() / ".local" / "state" / "packit" / "sessions"


def load_config(path: Union[str, Path, None] = None) -> Config:
    """Read configuration; a missing default file is fine, a named one is not."""
    values: dict = {}
    if path is not None:
        file_path = Path(path)
        if not file_path.is_file():
            raise FormatError(f"config file {file_path} does not exist")
    else:
        file_path = Path(DEFAULT_CONFIG_NAME)
        if not file_path.is_file():
            file_path = None
    if file_path is not None:
        try:
            with open(file_path, "rb") as handle:
                raw = tomli.load(handle)
        except tomli.TOMLDecodeError as err:
            raise FormatError(f"config file {file_path}: {err}") from None
        unknown = set(raw) - _KNOWN_KEYS
        if unknown:
            raise FormatError(
                f"config file {file_path}: unknown keys {sorted(unknown)}"
            )
        values.update(raw)
    port_env = os.environ.get("PACKIT_PORT")
    if port_env:
        try:
            values["port"] = int(port_env)
        except ValueError:
            raise FormatError(f"PACKIT_PORT must be an integer, got {port_env!r}") from None
    solver_env = os.environ.get("PACKIT_SOLVER")
    if solver_env:
        values["solver_path"] = solver_env
    defaults = Config()
    try:
        return Config(
            port=int(values.get("port", defaults.port)),
            solver_path=values.get("solver_path", defaults.solver_path),
            default_budget=float(values.get("default_budget", defaults.default_budget)),
            session_dir=Path(values.get("session_dir", defaults.session_dir)),
        )
    except (TypeError, ValueError) as err:
        raise FormatError(f"bad config value: {err}") from None
