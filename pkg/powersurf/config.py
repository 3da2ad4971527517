import copy
import json
from pathlib import Path
from typing import Any, Dict, Optional


class Config:
    """Numerical settings for every command, optionally overridden by a JSON file.

    Nothing is read or written unless ``config_file`` is given, so equal
    command lines always produce equal output.
    """

    def __init__(self, config_file: Optional[str] = None):
        self.config_file = config_file

        self.defaults = {
            "surface": {
                "tol_surface": 1e-10,
                "tol_distinct": 1e-8
            },
            "enumerator": {
                "tol_end": 1e-9
            },
            "verifier": {
                "n_starts": 1000,
                "max_iter": 50,
                "tol": 1e-11,
                "max_halvings": 20,
                "match_tol": 1e-7,
                "probe_radius": 1e-3,
                "n_probe": 200
            },
            "sampling": {
                "max_iter": 200,
                "max_retries": 20,
                "max_step": 0.1
            },
            "topology": {
                "n_samples": 20000,
                "epsilon": 0.15
            },
            "report": {
                "format": "json",
                "schema_version": "1.0"
            }
        }

        self.config = self.load_config()

    def _deep_merge(self, base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """Deep merge two dictionaries, with override values taking precedence."""
        result = copy.deepcopy(base)
        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._deep_merge(result[key], value)
            else:
                result[key] = value
        return result

    def load_config(self) -> Dict[str, Any]:
        if self.config_file is None:
            return copy.deepcopy(self.defaults)

        path = Path(self.config_file)
        try:
            with open(path, 'r', encoding='utf-8') as f:
                user_config = json.load(f)
        except (json.JSONDecodeError, OSError) as e:
            raise ValueError(f"cannot read config file {path}: {e}") from e
        if not isinstance(user_config, dict):
            raise ValueError(f"config file {path} must hold a JSON object")
        return self._deep_merge(self.defaults, user_config)

    def get(self, key: str, default=None):
        keys = key.split('.')
        value = self.config

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    def section(self, name: str) -> Dict[str, Any]:
        return dict(self.get(name, {}))


# Alias for backwards compatibility
ConfigManager = Config
