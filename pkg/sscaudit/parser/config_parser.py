"""Configuration file parser for ssc-audit."""

from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from ..config import HarnessSettings, build_settings
from ..core.errors import ConfigError


class ConfigFileParser:
    """
    Parse harness configuration files.

    YAML and JSON are both accepted (JSON is a subset of YAML, so one loader
    handles .yaml, .yml and .json). Example:

        parallel: 8
        bootstrap_b: 2000
        render:
          glyph_scale: 3
        audit:
          window: 200
          threshold: 0.05
        family:
          phi: 0.7
    """

    def load(self, filepath: Union[str, Path]) -> Dict[str, Any]:
        """
        Read a config file into a dictionary.

        Raises:
            ConfigError: File missing, unparsable, or not a mapping
        """
        path = Path(filepath)
        if not path.exists():
            raise ConfigError(f"Config file not found: {filepath}")

        try:
            with open(path, "r", encoding="utf-8") as f:
                config = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Cannot parse config file {filepath}: {e}") from e

        if config is None:
            return {}
        if not isinstance(config, dict):
            raise ConfigError("Configuration must be a mapping")
        return config

    def parse_file(
        self, filepath: Union[str, Path], overrides: Optional[Mapping[str, Any]] = None
    ) -> HarnessSettings:
        """Load a config file and validate it, with overrides applied on top."""
        return self.parse_dict(self.load(filepath), overrides)

    def parse_dict(
        self, config: Mapping[str, Any], overrides: Optional[Mapping[str, Any]] = None
    ) -> HarnessSettings:
        """Validate a configuration dictionary."""
        return build_settings(config, overrides)


def load_settings(
    filepath: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None
) -> HarnessSettings:
    """
    Convenience function: defaults, then the optional file, then overrides.

    Example:
        settings = load_settings("audit.yaml", {"parallel": 2})
    """
    parser = ConfigFileParser()
    if filepath is None:
        return parser.parse_dict({}, overrides)
    return parser.parse_file(filepath, overrides)
