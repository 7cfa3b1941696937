"""
Mollifier kernel entities.
Part of Domain layer.
"""
from dataclasses import dataclass
from typing import Optional

from app.domain.exceptions import EpsOutOfRange


@dataclass(frozen=True)
class MollifierKernel:
    """
    Scaled bump eta_eps(x) = eta(x / eps) / eps.
    The unscaled profile vanishes outside (-1, 1) and has unit mass.
    """

    epsilon: float
    second_moment: float
    profile: str = "bump"

    @classmethod
    def create(cls, epsilon: float, second_moment: float, profile: str = "bump") -> "MollifierKernel":
        if not 0.0 < epsilon < 0.5:
            raise EpsOutOfRange(f"epsilon must lie in (0, 1/2), got {epsilon}")
        if second_moment <= 0:
            raise ValueError("Kernel second moment must be positive")
        return cls(epsilon=float(epsilon), second_moment=float(second_moment), profile=profile)


@dataclass
class MollifySweepRow:
    """One epsilon of a mollification sweep. Energies are filled in by energy experiments."""

    epsilon: float
    speed_min: float
    speed_max: float
    speed_deviation: float
    e_mobius: Optional[float] = None
    e1: Optional[float] = None
    e2: Optional[float] = None

    def __post_init__(self):
        if self.speed_min > self.speed_max:
            raise ValueError("speed_min cannot exceed speed_max")
        if self.speed_deviation < 0:
            raise ValueError("speed_deviation must be non-negative")
