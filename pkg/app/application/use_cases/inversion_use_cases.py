"""
Inversion use cases.
Part of Application layer - Moebius invariance of the energies under sphere inversions.
"""
import logging
import math
from typing import List, Optional

from app.application.use_cases.energy_use_cases import quadrature_spec
from app.application.use_cases.outcome import Check, ExperimentOutcome, Table
from app.domain.entities.curve import ClosedCurve
from app.domain.entities.energy import EnergyReport
from app.domain.entities.inversion import SphereInversion
from app.domain.services.energies import energy_report, energy_report_open
from app.domain.services.mobius_transform import (
    circle_fit_residual,
    collinearity_residual,
    invert_centered_on_curve,
    invert_closed,
    random_off_center_inversions,
)
from app.domain.value_objects.curve_spec import CurveKind
from app.domain.value_objects.experiment_config import ExperimentConfig

logger = logging.getLogger(__name__)

IDENTITY_COLUMNS = [
    "quantity", "closed_value", "image_value", "expected_shift", "difference",
    "tail_estimate", "remainder_estimate",
]
TWO_PI_SQUARED = 2.0 * math.pi ** 2
# Relative residual below which an image counts as a circle or a line
SHAPE_TOLERANCE = 1e-6


def _quantities(report: EnergyReport) -> dict:
    return {
        "e_mobius": report.e_mobius,
        "e1": report.e1,
        "e2": report.e2,
        "e1_plus_e2": report.e1 + report.e2,
    }


def _identity_rows(
    closed: EnergyReport, image: EnergyReport, shifts: dict, suffix: str = ""
) -> List[list]:
    rows = []
    before, after = _quantities(closed), _quantities(image)
    remainder = closed.remainder_estimate + image.remainder_estimate
    for name, value in before.items():
        shift: Optional[float] = shifts.get(name)
        difference = None if shift is None else after[name] - (value + shift)
        rows.append([
            f"{name}{suffix}", value, after[name], shift, difference, image.tail_estimate, remainder,
        ])
    return rows


class InversionUseCases:
    """Use cases for sphere inversions of closed curves."""

    def __init__(self, jobs: int = 1):
        self.jobs = jobs

    def invert(self, config: ExperimentConfig, curve: ClosedCurve) -> ExperimentOutcome:
        """Invert the curve and compare its energies with the image's."""
        if config.center_mode == "on-curve":
            return self._invert_on_curve(config, curve)
        return self._invert_off_curve(config, curve)

    def _invert_on_curve(self, config: ExperimentConfig, curve: ClosedCurve) -> ExperimentOutcome:
        spec = quadrature_spec(config)
        closed = energy_report(curve, spec)
        image = invert_centered_on_curve(
            curve, config.center_t0, config.inversion_radius, config.r_dom, config.open_samples
        )
        image_report = energy_report_open(image, spec)
        logger.info(
            f"Centered inversion of {config.curve.curve_id}: E1 {closed.e1:.8g} -> {image_report.e1:.8g}"
        )

        shifts = {"e_mobius": -4.0, "e1": -TWO_PI_SQUARED, "e2": TWO_PI_SQUARED, "e1_plus_e2": 0.0}
        rows = _identity_rows(closed, image_report, shifts)
        outcome = ExperimentOutcome(kind=config.kind.value, curve_id=config.curve.curve_id)
        outcome.tables.append(Table("invert.identity", IDENTITY_COLUMNS, rows))
        outcome.open_curves["invert.image"] = image

        for name, closed_value, _, _, difference, tail, remainder in rows:
            bound = config.relative_tolerance * max(abs(closed_value), 1.0) + tail + remainder
            outcome.checks.append(Check(
                f"{name}_shift", abs(difference) <= bound, f"difference={difference:.3e}, bound={bound:.3e}",
            ))
        if config.curve.kind == CurveKind.CIRCLE:
            residual = collinearity_residual(image.samples)
            outcome.checks.append(Check(
                "image_is_line", residual <= SHAPE_TOLERANCE, f"collinearity residual {residual:.3e}",
            ))
        return outcome

    def _invert_off_curve(self, config: ExperimentConfig, curve: ClosedCurve) -> ExperimentOutcome:
        spec = quadrature_spec(config)
        closed = energy_report(curve, spec)
        if config.center_mode == "point":
            inversions = [SphereInversion.create(config.center_point, config.inversion_radius)]
        else:
            inversions = random_off_center_inversions(curve, config.inversion_count, config.seed)

        outcome = ExperimentOutcome(kind=config.kind.value, curve_id=config.curve.curve_id)
        rows: List[list] = []
        shifts = {"e_mobius": 0.0, "e1_plus_e2": 0.0}
        for index, inversion in enumerate(inversions):
            suffix = "" if len(inversions) == 1 else f"#{index}"
            image = invert_closed(curve, inversion)
            image_report = energy_report(image, spec)
            block = _identity_rows(closed, image_report, shifts, suffix)
            rows.extend(block)
            outcome.closed_curves[f"invert.image{suffix.replace('#', '_')}"] = image

            for name, _, _, shift, difference, _, remainder in block:
                if shift is None:
                    continue
                bound = config.relative_tolerance + remainder
                outcome.checks.append(Check(
                    f"{name}_invariant", abs(difference) <= bound,
                    f"difference={difference:.3e}, bound={bound:.3e}",
                ))
            if config.curve.kind == CurveKind.CIRCLE:
                residual = circle_fit_residual(image.samples)
                outcome.checks.append(Check(
                    f"image_is_circle{suffix}", residual <= SHAPE_TOLERANCE, f"circle fit residual {residual:.3e}",
                ))

        outcome.tables.append(Table("invert.identity", IDENTITY_COLUMNS, rows))
        return outcome
