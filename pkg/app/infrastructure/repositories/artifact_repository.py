"""
Artifact repository - CSV outputs with provenance headers.
Part of Infrastructure layer.
"""
import csv
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, List, Sequence

import numpy as np

from app.core.config import settings
from app.domain.entities.curve import ClosedCurve, OpenCurve
from app.domain.entities.polygon import Polygon
from app.domain.value_objects.experiment_config import ExperimentConfig

logger = logging.getLogger(__name__)


def format_cell(value: Any) -> str:
    """Deterministic text for a CSV cell."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


class ArtifactRepository:
    """Writes experiment tables, curves and polygons under one output directory."""

    def __init__(self, output_dir):
        self.output_dir = Path(output_dir)

    def _provenance(self, kind: str, config_hash: str) -> List[str]:
        generated = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return [
            f"# {settings.APP_NAME} {settings.APP_VERSION} kind={kind} config_sha256={config_hash}",
            f"# generated={generated}",
        ]

    def write_table(
        self,
        name: str,
        columns: Sequence[str],
        rows: Iterable[Sequence[Any]],
        config: ExperimentConfig,
    ) -> Path:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        path = self.output_dir / f"{name}.csv"
        with path.open("w", encoding="utf-8", newline="") as handle:
            for line in self._provenance(config.kind.value, config.config_hash()):
                handle.write(line + "\n")
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([format_cell(value) for value in row])
        logger.info(f"Wrote {path}")
        return path

    def write_config(self, config: ExperimentConfig) -> Path:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        path = self.output_dir / f"{config.kind.value}.config.json"
        path.write_text(config.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return path

    def write_closed_curve(self, name: str, curve: ClosedCurve, config: ExperimentConfig) -> Path:
        columns = ["t"] + [f"x{i}" for i in range(1, curve.dimension + 1)]
        rows = ([t, *point] for t, point in zip(curve.nodes, curve.samples))
        return self.write_table(name, columns, rows, config)

    def write_open_curve(self, name: str, curve: OpenCurve, config: ExperimentConfig) -> Path:
        columns = ["s"] + [f"x{i}" for i in range(1, curve.dimension + 1)]
        rows = ([s, *point] for s, point in zip(curve.nodes, curve.samples))
        return self.write_table(name, columns, rows, config)

    def write_polygon(self, name: str, polygon: Polygon, config: ExperimentConfig) -> Path:
        dimension = polygon.vertices.shape[1]
        columns = ["index", "parameter"] + [f"x{i}" for i in range(1, dimension + 1)]
        rows = (
            [index, parameter, *vertex]
            for index, (parameter, vertex) in enumerate(zip(polygon.parameters, polygon.vertices))
        )
        return self.write_table(name, columns, rows, config)
