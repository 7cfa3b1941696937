"""
Experiment config repository - JSON config files.
Part of Infrastructure layer.
"""
import json
import re
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import ValidationError

from app.domain.exceptions import ConfigError
from app.domain.value_objects.experiment_config import ExperimentConfig
from app.infrastructure.repositories.curve_repository import validation_to_config_error


def _key_lines(text: str) -> Dict[str, int]:
    """First line on which each JSON key appears."""
    lines: Dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        for key in re.findall(r'"([^"\\]+)"\s*:', raw):
            lines.setdefault(key, number)
    return lines


class ConfigRepository:
    """Reads and validates experiment configs."""

    def parse(self, text: str, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object", line=1)
        return self.from_dict(data, overrides, _key_lines(text))

    def from_dict(
        self,
        data: Dict[str, Any],
        overrides: Optional[Dict[str, Any]] = None,
        lines: Optional[Dict[str, int]] = None,
    ) -> ExperimentConfig:
        merged = dict(data)
        for key, value in (overrides or {}).items():
            if value is not None:
                merged[key] = value
        try:
            return ExperimentConfig.model_validate(merged)
        except ValidationError as exc:
            raise validation_to_config_error(exc, lines) from exc

    def load(self, path, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
        resolved = Path(path)
        try:
            text = resolved.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {resolved}: {exc}") from exc
        return self.parse(text, overrides)
