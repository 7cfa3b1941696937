"""
Experiment configuration value object.
Part of Domain layer - every knob of an experiment, echoed into its output.
"""
import hashlib
from enum import Enum
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.config import settings
from app.domain.entities.energy import DiagonalPolicy
from app.domain.services.spectral import is_power_of_two
from app.domain.value_objects.curve_spec import CurveSpec


class ExperimentKind(str, Enum):
    ENERGY = "energy"
    DECOMPOSE = "decompose"
    MOLLIFY_SWEEP = "mollify-sweep"
    REPARAM_CONVERGE = "reparam-converge"
    GAMMA_SWEEP = "gamma-sweep"
    INVERT = "invert"
    INSCRIBE = "inscribe"
    SOBOLEV = "sobolev"
    ENERGY_CONVERGE = "energy-converge"


class ExperimentConfig(BaseModel):
    """
    Validated experiment configuration.
    Round-trips losslessly through model_dump_json / model_validate_json.
    """

    model_config = ConfigDict(extra="forbid")

    kind: ExperimentKind
    curve: CurveSpec

    # energies
    grid_x: int = Field(default_factory=lambda: settings.DEFAULT_GRID)
    grid_w: int = Field(default_factory=lambda: settings.DEFAULT_GRID)
    diagonal_policy: DiagonalPolicy = DiagonalPolicy.ANALYTIC_LIMIT
    band: int = Field(default=1, ge=1)
    tolerance: float = Field(default=1e-2, gt=0)

    # sweeps
    eps_list: List[float] = Field(default_factory=lambda: [0.2, 0.1, 0.05, 0.025])
    m_list: List[int] = Field(default_factory=lambda: [8, 16, 32, 64, 128, 256])
    mollify_first: bool = False

    # inscribed polygons
    n: int = Field(default=4, ge=2)
    x0: float = 0.0

    # inversions
    center_mode: Literal["on-curve", "point", "random"] = "on-curve"
    center_t0: float = 0.0
    center_point: Optional[List[float]] = None
    inversion_count: int = Field(default=3, ge=1)
    inversion_radius: float = Field(default=1.0, gt=0)
    r_dom: float = Field(default=30.0, gt=0)
    open_samples: int = Field(default=2049, ge=17)
    relative_tolerance: float = Field(default=2e-2, gt=0)

    # seminorms
    s: float = Field(default=0.5, gt=0, lt=1)
    p: float = Field(default=2.0, ge=1)
    r_list: List[float] = Field(default_factory=lambda: [1 / 64, 1 / 32, 1 / 16, 1 / 8, 1 / 4])
    sobolev_grid: int = 1024

    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)
    jobs: int = Field(default_factory=lambda: settings.DEFAULT_JOBS, ge=1)
    assert_tolerances: bool = True
    output_dir: str = Field(default_factory=lambda: settings.OUTPUT_DIR)

    @field_validator("grid_x", "grid_w")
    @classmethod
    def _grid(cls, value: int) -> int:
        if value < 64 or not is_power_of_two(value):
            raise ValueError(f"grid must be a power of two >= 64, got {value}")
        return value

    @field_validator("sobolev_grid")
    @classmethod
    def _sobolev_grid(cls, value: int) -> int:
        if value < 64 or value % 2:
            raise ValueError(f"sobolev_grid must be even and >= 64, got {value}")
        return value

    @field_validator("eps_list")
    @classmethod
    def _eps(cls, values: List[float]) -> List[float]:
        for eps in values:
            if not 0 < eps < 0.5:
                raise ValueError(f"every epsilon must lie in (0, 1/2), got {eps}")
        return values

    @field_validator("m_list")
    @classmethod
    def _m(cls, values: List[int]) -> List[int]:
        for m in values:
            if m < 3:
                raise ValueError(f"every m must be >= 3, got {m}")
        return values

    @field_validator("r_list")
    @classmethod
    def _radii(cls, values: List[float]) -> List[float]:
        for r in values:
            if not 0 < r <= 0.5:
                raise ValueError(f"every radius must lie in (0, 1/2], got {r}")
        return values

    @field_validator("open_samples")
    @classmethod
    def _odd(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("open_samples must be odd")
        return value

    @model_validator(mode="after")
    def _center(self) -> "ExperimentConfig":
        if self.kind == ExperimentKind.INVERT and self.center_mode == "point" and not self.center_point:
            raise ValueError("center_mode 'point' requires center_point")
        return self

    def canonical_json(self) -> str:
        """JSON dump without the knobs that do not affect results."""
        return self.model_dump_json(exclude={"jobs", "output_dir"})

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()
