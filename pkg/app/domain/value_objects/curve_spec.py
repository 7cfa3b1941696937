"""
Curve specification value object.
Part of Domain layer - declarative description of a test curve.
"""
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.config import settings
from app.domain.services.spectral import is_power_of_two


class CurveKind(str, Enum):
    CIRCLE = "circle"
    ELLIPSE = "ellipse"
    TORUS_KNOT = "torus_knot"
    LACUNARY = "lacunary"
    SAMPLES = "samples"


class CurveSpec(BaseModel):
    """Named analytic family or a sample file, plus optional arc-length preprocessing."""

    model_config = ConfigDict(extra="forbid")

    kind: CurveKind
    sample_count: int = Field(default_factory=lambda: settings.DEFAULT_SAMPLE_COUNT)
    dimension: Optional[int] = None
    radius: Optional[float] = Field(default=None, gt=0)
    a: float = Field(default=2.0, gt=0)
    b: float = Field(default=1.0, gt=0)
    p: int = 2
    q: int = 3
    major: float = Field(default=2.0, gt=0)
    minor: float = Field(default=1.0, gt=0)
    terms: int = Field(default=4, ge=1)
    decay: float = Field(default=0.5, gt=0, le=1)
    path: Optional[str] = None
    arclength: bool = False

    @field_validator("sample_count")
    @classmethod
    def _power_of_two(cls, value: int) -> int:
        if value < 16 or not is_power_of_two(value):
            raise ValueError(f"sample_count must be a power of two >= 16, got {value}")
        return value

    @field_validator("dimension")
    @classmethod
    def _dimension_range(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and not 2 <= value <= settings.MAX_DIMENSION:
            raise ValueError(f"dimension must be between 2 and {settings.MAX_DIMENSION}")
        return value

    @model_validator(mode="after")
    def _samples_need_path(self) -> "CurveSpec":
        if self.kind == CurveKind.SAMPLES and not self.path:
            raise ValueError("kind 'samples' requires a path")
        return self

    @property
    def curve_id(self) -> str:
        """Short identifier used in CSV rows."""
        if self.kind == CurveKind.CIRCLE:
            label = "circle" if self.radius is None else f"circle(r={self.radius:g})"
        elif self.kind == CurveKind.ELLIPSE:
            label = f"ellipse({self.a:g},{self.b:g})"
        elif self.kind == CurveKind.TORUS_KNOT:
            label = f"torus_knot({self.p},{self.q})"
        elif self.kind == CurveKind.LACUNARY:
            label = f"lacunary({self.terms},{self.decay:g})"
        else:
            label = f"samples({self.path})"
        return f"arclength:{label}" if self.arclength else label
