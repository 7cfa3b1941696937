"""
Curve repository - curve spec files and sample CSVs.
Part of Infrastructure layer.

Spec files are key/value text:

    # (2,3) torus knot
    kind = torus_knot(2, 3)
    sample_count = 512

Sample files are CSV with a header row t,x1,...,xd and rows t_j = j/N.
"""
import csv
import io
import logging
import re
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from app.domain.entities.curve import ClosedCurve
from app.domain.exceptions import ConfigError
from app.domain.services import curve_families
from app.domain.services.curve_core import reparametrize_by_arclength
from app.domain.value_objects.curve_spec import CurveKind, CurveSpec

logger = logging.getLogger(__name__)

_SHORTHAND = re.compile(r"^(\w+)\s*\((.*)\)$")
_SHORTHAND_ARGS = {
    "circle": ("radius",),
    "ellipse": ("a", "b"),
    "torus_knot": ("p", "q"),
    "lacunary": ("terms", "decay"),
    "samples": ("path",),
}


def validation_to_config_error(exc: ValidationError, lines: Optional[Dict[str, int]] = None) -> ConfigError:
    """First pydantic error as a ConfigError naming its field and (when known) its line."""
    error = exc.errors()[0]
    location = [str(part) for part in error.get("loc", ())]
    field = ".".join(location) or None
    line = None
    if lines:
        for part in reversed(location):
            if part in lines:
                line = lines[part]
                break
    return ConfigError(error.get("msg", str(exc)), line=line, field=field)


class CurveRepository:
    """Loads curve specs and samples, and builds ClosedCurve objects from specs."""

    def __init__(self, base_dir: Optional[Path] = None):
        self.base_dir = Path(base_dir) if base_dir else Path.cwd()

    def _resolve(self, path) -> Path:
        candidate = Path(path)
        return candidate if candidate.is_absolute() else self.base_dir / candidate

    def parse_spec(self, text: str) -> CurveSpec:
        """Parse key/value spec text. Errors carry the offending line number."""
        values: Dict[str, str] = {}
        lines: Dict[str, int] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            content = raw.split("#", 1)[0].strip()
            if not content:
                continue
            if "=" not in content:
                raise ConfigError(f"expected 'key = value', got '{content}'", line=number)
            key, value = (part.strip() for part in content.split("=", 1))
            if not key:
                raise ConfigError("missing key", line=number)
            if key in values:
                raise ConfigError("duplicate key", line=number, field=key)

            if key == "kind":
                kind, extra = self._expand_kind(value, number)
                value = kind
                for extra_key, extra_value in extra.items():
                    values[extra_key] = extra_value
                    lines[extra_key] = number
            values[key] = value
            lines[key] = number

        if "kind" not in values:
            raise ConfigError("curve spec has no 'kind'", field="kind")
        try:
            return CurveSpec.model_validate(values)
        except ValidationError as exc:
            raise validation_to_config_error(exc, lines) from exc

    def _expand_kind(self, value: str, line: int) -> Tuple[str, Dict[str, str]]:
        match = _SHORTHAND.match(value)
        if not match:
            return value, {}
        kind, arguments = match.group(1), match.group(2)
        names = _SHORTHAND_ARGS.get(kind)
        if names is None:
            raise ConfigError(f"unknown curve kind '{kind}'", line=line, field="kind")
        parts = [part.strip() for part in arguments.split(",")] if arguments.strip() else []
        if len(parts) > len(names):
            raise ConfigError(f"{kind} takes at most {len(names)} arguments", line=line, field="kind")
        return kind, dict(zip(names, parts))

    def load_spec(self, path) -> CurveSpec:
        resolved = self._resolve(path)
        try:
            text = resolved.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read curve spec {resolved}: {exc}") from exc
        spec = self.parse_spec(text)
        if spec.kind == CurveKind.SAMPLES and not Path(spec.path).is_absolute():
            spec = spec.model_copy(update={"path": str(resolved.parent / spec.path)})
        return spec

    def load_samples(self, path) -> np.ndarray:
        """Read t,x1..xd rows; t must be the uniform grid j/N."""
        resolved = self._resolve(path)
        try:
            text = resolved.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read samples {resolved}: {exc}") from exc

        reader = csv.reader(io.StringIO(text), skipinitialspace=True)
        header_seen = False
        data = []
        for row in reader:
            number = reader.line_num
            cells = [cell.strip() for cell in row]
            if not any(cells) or cells[0].startswith("#"):
                continue
            if not header_seen:
                expected = ["t"] + [f"x{i}" for i in range(1, len(cells))]
                if cells != expected or len(cells) < 3:
                    raise ConfigError(f"header must be t,x1,...,xd; got '{','.join(row)}'", line=number)
                header_seen = True
                width = len(cells)
                continue
            if len(cells) != width:
                raise ConfigError(f"expected {width} columns, got {len(cells)}", line=number)
            try:
                data.append((number, [float(cell) for cell in cells]))
            except ValueError as exc:
                raise ConfigError(f"non-numeric value: {exc}", line=number) from exc

        if not data:
            raise ConfigError(f"no samples in {resolved}")
        values = np.array([row for _, row in data])
        count = values.shape[0]
        for index, (number, row) in enumerate(data):
            if abs(row[0] - index / count) > 1e-12:
                raise ConfigError(f"t must equal {index}/{count}, got {row[0]}", line=number, field="t")
        return values[:, 1:]

    def build(self, spec: CurveSpec) -> ClosedCurve:
        """Construct the curve a spec describes (optionally reparametrized by arc length)."""
        try:
            curve = self._build_family(spec)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc), field="curve") from exc
        if spec.arclength:
            curve = reparametrize_by_arclength(curve)
        logger.info(f"Built curve {spec.curve_id}: N={curve.sample_count}, d={curve.dimension}")
        return curve

    def _build_family(self, spec: CurveSpec) -> ClosedCurve:
        count = spec.sample_count
        if spec.kind == CurveKind.CIRCLE:
            radius = spec.radius if spec.radius is not None else curve_families.UNIT_CIRCLE_RADIUS
            return curve_families.circle(count, radius, spec.dimension or 2)
        if spec.kind == CurveKind.ELLIPSE:
            return curve_families.ellipse(count, spec.a, spec.b, spec.dimension or 2)
        if spec.kind == CurveKind.TORUS_KNOT:
            return curve_families.torus_knot(count, spec.p, spec.q, spec.major, spec.minor, spec.dimension or 3)
        if spec.kind == CurveKind.LACUNARY:
            return curve_families.lacunary(count, spec.terms, spec.decay, spec.dimension or 3)

        samples = self.load_samples(spec.path)
        curve = curve_families.from_points(samples, source=f"samples({Path(spec.path).name})")
        if spec.dimension and spec.dimension != curve.dimension:
            curve = curve.padded(spec.dimension)
        return curve
