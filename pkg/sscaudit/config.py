"""Harness settings: every tunable with its default."""

from typing import Any, Dict, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .audit.engine import AuditConfig
from .core.errors import ConfigError
from .models.scaled_sim import ScalingFamily
from .translator.render import RenderConfig


class HarnessSettings(BaseModel):
    """
    Validated settings shared by all commands.

    Values come from defaults, then an optional config file, then CLI flags.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    parallel: int = Field(default=4, ge=1)
    cache_dir: str = ".ssc_cache"
    bootstrap_b: int = Field(default=1000, ge=100)
    seed: int = Field(default=0, ge=0)
    base_url: str = "http://localhost:8000/v1"
    max_tokens: int = Field(default=64, ge=1)
    timeout_s: float = Field(default=60.0, gt=0)
    render: RenderConfig = Field(default_factory=RenderConfig)
    audit: AuditConfig = Field(default_factory=AuditConfig)
    family: ScalingFamily = Field(default_factory=ScalingFamily)


def deep_merge(base: Mapping[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """Merge overrides into base; None values in overrides are ignored."""
    merged: Dict[str, Any] = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, Mapping):
            nested = merged.get(key)
            merged[key] = deep_merge(nested if isinstance(nested, Mapping) else {}, value)
        else:
            merged[key] = value
    return merged


def build_settings(
    file_data: Optional[Mapping[str, Any]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> HarnessSettings:
    """
    Validate settings from config-file data with flag overrides on top.

    Raises:
        ConfigError: A value fails validation
    """
    data = deep_merge(file_data or {}, overrides or {})
    try:
        return HarnessSettings(**data)
    except ValidationError as e:
        raise ConfigError(f"Invalid settings: {e}") from e
