"""
Quadrature specification and energy report entities.
Part of Domain layer.
"""
import math
from dataclasses import dataclass
from enum import Enum

from app.domain.services import spectral


class DiagonalPolicy(str, Enum):
    """How the singular band around w = 0 is treated."""

    EXCLUDE_BAND = "exclude-band"
    ANALYTIC_LIMIT = "analytic-limit"


@dataclass(frozen=True)
class QuadratureSpec:
    """Grid, diagonal policy and tolerance for every energy double integral."""

    nx: int = 512
    nw: int = 512
    policy: DiagonalPolicy = DiagonalPolicy.ANALYTIC_LIMIT
    band: int = 1
    tolerance: float = 1e-2

    MIN_GRID = 64

    @classmethod
    def create(
        cls,
        nx: int = 512,
        nw: int = 512,
        policy: DiagonalPolicy = DiagonalPolicy.ANALYTIC_LIMIT,
        band: int = 1,
        tolerance: float = 1e-2,
    ) -> "QuadratureSpec":
        """
        Factory method to create a quadrature spec.
        Grids must be powers of two of at least MIN_GRID points.
        """
        for name, value in (("nx", nx), ("nw", nw)):
            if value < cls.MIN_GRID or not spectral.is_power_of_two(value):
                raise ValueError(f"{name} must be a power of two >= {cls.MIN_GRID}, got {value}")
        if band < 1:
            raise ValueError("Diagonal band must be at least one cell wide")
        if 2 * band - 1 >= nw:
            raise ValueError("Diagonal band covers the whole w grid")
        if tolerance <= 0:
            raise ValueError("Tolerance must be positive")
        return cls(nx=nx, nw=nw, policy=DiagonalPolicy(policy), band=band, tolerance=tolerance)


@dataclass(frozen=True)
class EnergyReport:
    """
    Moebius energy with its decomposition into E1 and E2.
    Closed curves satisfy E_mob = E1 + E2 + 4, open (inverted) curves E_mob = E1 + E2.
    """

    e_mobius: float
    e1: float
    e2: float
    residual: float
    spec: QuadratureSpec
    remainder_estimate: float = 0.0
    tail_estimate: float = 0.0
    min_chord_arc: float = 1.0
    closed: bool = True

    @classmethod
    def create(
        cls,
        e_mobius: float,
        e1: float,
        e2: float,
        spec: QuadratureSpec,
        remainder_estimate: float = 0.0,
        tail_estimate: float = 0.0,
        min_chord_arc: float = 1.0,
        closed: bool = True,
    ) -> "EnergyReport":
        values = (e_mobius, e1, e2, remainder_estimate, tail_estimate)
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"Energy report contains non-finite values: {values}")
        offset = 4.0 if closed else 0.0
        return cls(
            e_mobius=e_mobius,
            e1=e1,
            e2=e2,
            residual=e_mobius - e1 - e2 - offset,
            spec=spec,
            remainder_estimate=remainder_estimate,
            tail_estimate=tail_estimate,
            min_chord_arc=min_chord_arc,
            closed=closed,
        )

    def decomposition_holds(self, floor: float = 1e-2) -> bool:
        """|residual| <= max(floor, 3 * remainder estimate)."""
        return abs(self.residual) <= max(floor, 3.0 * self.remainder_estimate)
