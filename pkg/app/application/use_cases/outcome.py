"""
Experiment outcome containers.
Part of Application layer - what a use case hands back to the runner and the API.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Sequence, TypeVar

from app.domain.entities.curve import ClosedCurve, OpenCurve
from app.domain.entities.polygon import Polygon

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class Table:
    name: str
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)


@dataclass
class Check:
    """A tolerance claim evaluated on the experiment output."""

    name: str
    passed: bool
    detail: str = ""


@dataclass
class ExperimentOutcome:
    kind: str
    curve_id: str
    tables: List[Table] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)
    closed_curves: Dict[str, ClosedCurve] = field(default_factory=dict)
    open_curves: Dict[str, OpenCurve] = field(default_factory=dict)
    polygons: Dict[str, Polygon] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_dict(self) -> dict:
        """JSON-friendly view; non-finite floats become None."""
        return {
            "kind": self.kind,
            "curve_id": self.curve_id,
            "passed": self.passed,
            "tables": [
                {"name": t.name, "columns": t.columns, "rows": [[_json_value(v) for v in row] for row in t.rows]}
                for t in self.tables
            ],
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


def _json_value(value: Any) -> Any:
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def map_cells(function: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> List[R]:
    """Map over independent experiment cells, in order, on up to jobs threads."""
    cells = list(items)
    if jobs <= 1 or len(cells) <= 1:
        return [function(cell) for cell in cells]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(function, cells))


def decreasing(values: Sequence[float], floor: float = 0.0, strict: bool = False) -> bool:
    """Each value is below its predecessor, ignoring steps where it is already under floor."""
    for previous, current in zip(values, values[1:]):
        if current <= floor:
            continue
        if current > previous or (strict and current == previous):
            return False
    return True
