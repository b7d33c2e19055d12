from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields
from typing import TYPE_CHECKING, Any, ClassVar

import psutil
import toml

from ghdist.gh_exact import DEFAULT_BUDGET
from ghdist.metric_core import EPS_METRIC
from ghdist.types import DomainError

if TYPE_CHECKING:
    from pathlib import Path


@dataclass
class GHConfig:
    """Configuration for distance computations run from the command line.

    Attributes:
        budget: Maximum number of search-tree nodes for exact searches.
        workers: Number of worker processes for exact searches (0 for one per physical core).
        check_coverage: Whether to verify coverage at every accepted search leaf.
        significant_digits: Number of significant digits when printing decimals.
        tolerance: Largest discrepancy between two methods still counted as agreement.
        enable_debug: Whether to enable debug logging.
    """

    budget: int = DEFAULT_BUDGET
    workers: int = 1
    check_coverage: bool = False
    significant_digits: int = 12
    tolerance: float = EPS_METRIC
    enable_debug: bool = False
    extra_config: dict[str, Any] = field(default_factory=dict)

    # Define the structure of the TOML file
    config_structure: ClassVar[dict[str, list[str]]] = {
        "search": ["budget", "workers", "check_coverage"],
        "output": ["significant_digits", "tolerance"],
        "logging": ["enable_debug"],
    }

    def __post_init__(self):
        if self.budget < 1:
            msg = f"Search budget must be positive, got {self.budget}."
            raise DomainError(msg)
        if self.workers < 0:
            msg = f"Worker count cannot be negative, got {self.workers}."
            raise DomainError(msg)
        if self.significant_digits < 1:
            msg = f"Need at least one significant digit, got {self.significant_digits}."
            raise DomainError(msg)

    @property
    def resolved_workers(self) -> int:
        """The worker count, with 0 replaced by the number of physical cores."""
        if self.workers:
            return self.workers
        return psutil.cpu_count(logical=False) or psutil.cpu_count() or 1

    def with_overrides(self, **overrides: Any) -> GHConfig:
        """A copy with every non-None override applied."""
        values = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "extra_config"}
        values |= {k: v for k, v in overrides.items() if v is not None}
        config = GHConfig(**values)
        config.extra_config = dict(self.extra_config)
        return config


class ConfigLoader:
    """Class for loading and saving the computation configuration."""

    @classmethod
    def load(cls, config_file: Path | None = None) -> GHConfig:
        """Load the configuration from a TOML file, or the defaults when no file is given.

        Raises:
            DomainError: If the file does not exist or holds invalid values.
            toml.TomlDecodeError: If the configuration file is malformed.
        """
        if config_file is None:
            return GHConfig()
        if not config_file.exists():
            msg = f"Config file does not exist: {config_file}"
            raise DomainError(msg)

        with config_file.open(encoding="utf-8") as f:
            config_data = toml.load(f)

        return cls._process_config(config_data)

    @classmethod
    def save(cls, config: GHConfig, config_file: Path) -> None:
        """Write the configuration as sectioned TOML."""
        config_dict: dict[str, Any] = {
            section: {k: getattr(config, k) for k in keys}
            for section, keys in GHConfig.config_structure.items()
        }
        if config.extra_config:
            config_dict["extra"] = config.extra_config

        with config_file.open("w", encoding="utf-8") as f:
            toml.dump(config_dict, f)

    @staticmethod
    def update_logger_level(logger: logging.Logger, debug: bool) -> None:
        """Switch the logger and all of its handlers between debug and info."""
        new_level = logging.DEBUG if debug else logging.INFO
        logger.setLevel(new_level)
        for handler in logger.handlers:
            handler.setLevel(new_level)
        logger.debug("Logger level updated to %s.", "debug" if debug else "info")

    @classmethod
    def _process_config(cls, config_data: dict[str, Any]) -> GHConfig:
        # Flatten the sectioned config
        flat_config: dict[str, Any] = {}
        extras: dict[str, Any] = {}
        for section, values in config_data.items():
            if section in GHConfig.config_structure and isinstance(values, dict):
                flat_config |= values
            elif section == "extra" and isinstance(values, dict):
                extras |= values
            else:
                flat_config[section] = values

        known = {k for keys in GHConfig.config_structure.values() for k in keys}
        known_attrs = {k: flat_config.pop(k) for k in known if k in flat_config}
        try:
            config = GHConfig(**known_attrs)
        except TypeError as e:
            msg = f"Invalid configuration values: {e}"
            raise DomainError(msg) from e
        config.extra_config = flat_config | extras
        return config
