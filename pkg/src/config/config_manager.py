"""
Configuration manager for the ghzsynth toolkit.
Handles loading and managing configuration from .env and config files.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

from src.core.gf2 import MinrankMode
from src.exceptions import ConfigurationError
from src.utils.logger import LoggerMixin

ArchitectureName = Literal['linear', 'dual']
InputKind = Literal['tableau', 'graph', 'matrix']


class SynthesisRouteConfig(BaseModel):
    """Configuration for one synthesis route."""

    name: str
    architecture: ArchitectureName
    input_kind: InputKind
    bound: str
    enabled: bool = True


class AppConfig(BaseModel):
    """Main application configuration."""

    app_name: str = 'ghzsynth'
    debug: bool = False
    log_level: str = 'INFO'
    default_architecture: ArchitectureName = 'linear'
    default_route: str = 'auto'
    minrank_exact_limit: int = Field(default=20, ge=1, le=24)
    minrank_mode: MinrankMode = 'auto'
    grid_routing_constant: int = Field(default=9, ge=3)
    swap_weight: int = Field(default=3, ge=0)
    bench_workers: int = Field(default=1, ge=1)
    report_schema_version: str = '1'
    synthesis_routes: List[SynthesisRouteConfig] = Field(default_factory=list)

    @field_validator('log_level')
    @classmethod
    def _known_level(cls, value: str) -> str:
        if value.upper() not in {'DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'}:
            raise ValueError(f'unknown log level {value}')
        return value.upper()


DEFAULT_ROUTES: List[Dict[str, Any]] = [
    {'name': 'cz-minrank', 'architecture': 'linear', 'input_kind': 'graph',
     'bound': 'minrank + 1 cliques'},
    {'name': 'cz-disentangle', 'architecture': 'linear', 'input_kind': 'graph',
     'bound': 'n - 1'},
    {'name': 'cz-bipartite', 'architecture': 'dual', 'input_kind': 'graph',
     'bound': 'ceil(n/2) + 1'},
    {'name': 'cx', 'architecture': 'linear', 'input_kind': 'matrix',
     'bound': '2n - 1'},
    {'name': 'hfree', 'architecture': 'linear', 'input_kind': 'matrix',
     'bound': 'n plus permutation'},
    {'name': 'linear', 'architecture': 'linear', 'input_kind': 'tableau',
     'bound': '2n + 1'},
    {'name': 'dual', 'architecture': 'dual', 'input_kind': 'tableau',
     'bound': 'ceil(3n/2) + 1 plus O(sqrt n) swaps'},
]


class ConfigManager(LoggerMixin):
    """Manages application configuration from multiple sources."""

    def __init__(self, config_file: Optional[Path] = None):
        self.config_file = Path(config_file or 'config/app_config.json')
        self.config: AppConfig = self._load_config()

    def _load_config(self) -> AppConfig:
        """Load configuration from file and environment."""
        load_dotenv()

        if self.config_file.exists():
            self.log_operation('loading_config', file=str(self.config_file))
            try:
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    config_data = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigurationError(
                    f'Config file {self.config_file} is not valid JSON: {e}'
                ) from e
        else:
            self.log_operation('creating_default_config', file=str(self.config_file))
            config_data = self._get_default_config()
            self._save_default_config(config_data)

        config_data = self._apply_env_overrides(config_data)

        try:
            return AppConfig(**config_data)
        except Exception as e:
            raise ConfigurationError(f'Invalid configuration: {e}') from e

    @staticmethod
    def _apply_env_overrides(config_data: Dict[str, Any]) -> Dict[str, Any]:
        """Apply GHZSYNTH_* environment overrides on top of file values."""
        merged = dict(config_data)
        overrides = {
            'GHZSYNTH_ARCHITECTURE': 'default_architecture',
            'GHZSYNTH_MINRANK_EXACT_LIMIT': 'minrank_exact_limit',
            'GHZSYNTH_MINRANK_MODE': 'minrank_mode',
            'GHZSYNTH_BENCH_WORKERS': 'bench_workers',
        }
        for env_name, key in overrides.items():
            value = os.getenv(env_name)
            if value:
                merged[key] = value
        return merged

    def _get_default_config(self) -> Dict[str, Any]:
        """Get default configuration structure."""
        return {
            'app_name': 'ghzsynth',
            'debug': False,
            'log_level': 'INFO',
            'default_architecture': 'linear',
            'default_route': 'auto',
            'minrank_exact_limit': 20,
            'minrank_mode': 'auto',
            'grid_routing_constant': 9,
            'swap_weight': 3,
            'bench_workers': 1,
            'report_schema_version': '1',
            'synthesis_routes': [dict(route) for route in DEFAULT_ROUTES],
        }

    def _save_default_config(self, config_data: Dict[str, Any]) -> None:
        """Save default configuration to file."""
        self.config_file.parent.mkdir(parents=True, exist_ok=True)
        with open(self.config_file, 'w', encoding='utf-8') as f:
            json.dump(config_data, f, indent=2)

    def get_route_config(self, route_name: str) -> SynthesisRouteConfig:
        """Get configuration for a specific synthesis route."""
        for route in self.config.synthesis_routes:
            if route.name == route_name:
                if not route.enabled:
                    raise ConfigurationError(f'Synthesis route {route_name} is disabled')
                return route
        raise ConfigurationError(f'Synthesis route {route_name} not configured')

    def get_available_routes(self) -> List[str]:
        """Get list of enabled synthesis routes."""
        return [r.name for r in self.config.synthesis_routes if r.enabled]

    def get_status(self) -> Dict[str, Any]:
        """Get configuration status information."""
        return {
            'config_file': str(self.config_file),
            'routes': self.get_available_routes(),
            'default_architecture': self.config.default_architecture,
            'default_route': self.config.default_route,
            'minrank_exact_limit': self.config.minrank_exact_limit,
            'minrank_mode': self.config.minrank_mode,
            'grid_routing_constant': self.config.grid_routing_constant,
            'swap_weight': self.config.swap_weight,
            'debug': self.config.debug,
            'log_level': self.config.log_level,
        }
