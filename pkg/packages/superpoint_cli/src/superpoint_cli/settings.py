# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

from pathlib import Path
from typing import Any, Literal

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
from dotenv import dotenv_values
from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, EnvSettingsSource, SettingsConfigDict

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.exceptions import ConfigError
from superpoint.settings import SketchSettings


PresetName = Literal["desk", "paper", "discrete"]

PRESETS: dict[str, dict[str, Any]] = {
    # c + s(r-1) must reach 32 - u = 30, hence s=7.
    "desk": {"g": 1024, "c": 10, "r": 4, "u": 2, "s": 7, "k": 300, "k_prime": 300, "theta": 1024.0},
    "paper": {"g": 4096, "c": 14, "r": 4, "u": 4, "s": 6, "k": 300, "k_prime": 300, "theta": 1024.0},
    # One coarse slice per 300-slice discrete window.
    "discrete": {"g": 1024, "c": 10, "r": 4, "u": 2, "s": 7, "k": 1, "k_prime": 1, "theta": 1024.0, "coarsen": 300},
}

# Config-file spellings that differ from field names.
ALIASES = {"kprime": "k_prime", "full_windows": "full_windows_only"}

SKETCH_FIELDS = tuple(SketchSettings.model_fields)


class RunConfig(BaseSettings):
    """
    Everything one CLI run needs: sketch geometry, input, outputs and run options.

    Sketch values keep their flat names on every layer (``k``, ``SUPERPOINT_K``,
    ``--k``); ``load_run_config`` routes them into ``sketch``.

    Env prefix: SUPERPOINT_

    Examples:
        SUPERPOINT_PRESET=paper
        SUPERPOINT_CADENCE=30
        SUPERPOINT_ORACLE=true
    """

    model_config = SettingsConfigDict(
        env_prefix="SUPERPOINT_",
        extra="ignore",
    )

    preset: PresetName = "desk"
    sketch: SketchSettings = Field(default_factory=SketchSettings)

    # Input and outputs
    trace: Path | None = None
    report: Path | None = None
    metrics: Path | None = None
    truth: Path | None = None
    bench: Path | None = None
    snapshot: Path | None = None

    # Run options
    oracle: bool = False
    cadence: int = Field(default=1, ge=1)
    workers: int = Field(default=1, ge=1)
    coarsen: int = Field(default=1, ge=1)
    full_windows_only: bool = True
    log: bool = True


    def violations(self) -> list[str]:
        """
        Every reason this configuration cannot run.

        Returns:
            list[str]
        """
        out = self.sketch.violations()
        if self.metrics is not None and not self.oracle:
            out.append("metrics output needs the oracle enabled")
        if self.truth is not None and not self.oracle:
            out.append("truth output needs the oracle enabled")
        return out


    def require(self, *fields: str) -> None:
        """
        Validate the configuration and check that ``fields`` are set.

        Raises:
            ConfigError: listing every problem found.
        """
        problems = self.violations()
        problems.extend(f"{name} is required" for name in fields if getattr(self, name) is None)
        if problems:
            raise ConfigError(violations=problems)


# Names a file, flag or environment layer may set.
KNOWN_KEYS = frozenset(RunConfig.model_fields) - {"sketch"} | frozenset(SKETCH_FIELDS)


def read_config_file(path: str | Path) -> dict[str, str]:
    """
    Read a ``key=value`` config file.

    Keys mirror the flag names; dashes and case are normalized.

    Args:
        path: Config file.

    Returns:
        field name -> raw value

    Raises:
        ConfigError: when the file is missing or a key is unknown.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(violations=[f"config file not found: {path}"])

    values: dict[str, str] = {}
    unknown: list[str] = []

    for key, value in dotenv_values(path).items():
        name = key.strip().lower().replace("-", "_")
        name = ALIASES.get(name, name)
        if name not in KNOWN_KEYS:
            unknown.append(key)
            continue
        if value is not None:
            values[name] = value

    if unknown:
        raise ConfigError(violations=[f"unknown config key: {key}" for key in unknown])
    return values


def load_run_config(
    flags: dict[str, Any] | None = None,
    *,
    config_file: str | Path | None = None,
) -> RunConfig:
    """
    Build the run configuration.

    Precedence: flags > config file > environment > preset > defaults.
    Flags set to None are treated as absent.

    Args:
        flags: Values given on the command line.
        config_file: Optional ``key=value`` file.

    Returns:
        RunConfig

    Raises:
        ConfigError: when a value is invalid.
    """
    flags = {k: v for k, v in (flags or {}).items() if v is not None and k in KNOWN_KEYS}
    file_values = read_config_file(config_file) if config_file is not None else {}

    try:
        # The nested model only sees SUPERPOINT_SKETCH; flat sketch vars come from its own source.
        from_env = {
            **EnvSettingsSource(SketchSettings)(),
            **{k: v for k, v in EnvSettingsSource(RunConfig)().items() if k != "sketch"},
        }

        preset = flags.get("preset") or file_values.get("preset") or from_env.get("preset") or "desk"
        if preset not in PRESETS:
            raise ConfigError(violations=[f"unknown preset: {preset}"])

        merged = {**PRESETS[preset], **from_env, **file_values, **flags, "preset": preset}
        sketch = {name: merged.pop(name) for name in SKETCH_FIELDS if name in merged}
        return RunConfig(**merged, sketch=sketch)
    except ValidationError as e:
        raise ConfigError(violations=[_describe(err) for err in e.errors()]) from e


def _describe(err: Any) -> str:
    # Sketch errors are reported under their flat names.
    loc = [str(part) for part in err["loc"]]
    if loc[:1] == ["sketch"] and len(loc) > 1:
        loc = loc[1:]
    return f"{'.'.join(loc)}: {err['msg']}"
