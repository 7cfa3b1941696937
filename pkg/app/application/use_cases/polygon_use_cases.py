"""
Polygon use cases.
Part of Application layer - discrete energy sweeps and inscribed equilateral polygons.
"""
import logging

from app.application.use_cases.energy_use_cases import quadrature_spec
from app.application.use_cases.outcome import Check, ExperimentOutcome, Table, decreasing, map_cells
from app.core.config import settings
from app.domain.entities.curve import ClosedCurve
from app.domain.services.curve_core import length
from app.domain.services.discrete_polygon import gamma_sweep, inscribe_uniform
from app.domain.services.inscribe import estimate_distortion_floor, gromov_distortion, inscribed_ngon
from app.domain.services.mollify import mollify
from app.domain.value_objects.experiment_config import ExperimentConfig

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["m", "E_m", "E_mobius", "gap", "remainder_estimate"]
INSCRIBE_COLUMNS = [
    "n", "x0", "side", "closing_residual", "chord_spread", "iterations",
    "distortion", "distortion_floor", "solutions",
]
CHORD_SPREAD_TOLERANCE = 1e-8


class PolygonUseCases:
    """Use cases for polygonal energies and inscribed polygons."""

    def __init__(self, jobs: int = 1):
        self.jobs = jobs

    def gamma_sweep(self, config: ExperimentConfig, curve: ClosedCurve) -> ExperimentOutcome:
        """E_m of inscribed m-gons against E_mob along the m list."""
        rows = gamma_sweep(
            curve, config.m_list, mollify_first=config.mollify_first, spec=quadrature_spec(config),
            map_fn=lambda function, items: map_cells(function, items, self.jobs),
        )
        outcome = ExperimentOutcome(kind=config.kind.value, curve_id=config.curve.curve_id)
        outcome.tables.append(Table(
            "gamma-sweep", SWEEP_COLUMNS,
            [[r.m, r.e_m, r.e_mobius, r.gap, r.remainder_estimate] for r in rows],
        ))

        ordered = sorted(rows, key=lambda row: row.m)
        gaps = [row.gap for row in ordered]
        outcome.checks.append(Check("gap_decreasing", decreasing(gaps), f"gaps={gaps}"))
        outcome.checks.append(Check(
            "gap_shrinks", len(gaps) < 2 or gaps[-1] < gaps[0],
            f"gap m={ordered[0].m}: {gaps[0]:.4g}, m={ordered[-1].m}: {gaps[-1]:.4g}",
        ))

        largest = ordered[-1].m
        target = mollify(curve, 1.0 / largest) if config.mollify_first else curve
        outcome.polygons[f"gamma-sweep.polygon_m{largest}"] = inscribe_uniform(target, largest)
        return outcome

    def inscribe(self, config: ExperimentConfig, curve: ClosedCurve) -> ExperimentOutcome:
        """Equilateral n-gon starting at gamma(x0) with its distortion diagnostics."""
        result = inscribed_ngon(curve, config.x0, config.n)
        distortion = gromov_distortion(result.polygon)
        floor = (
            estimate_distortion_floor(config.n, seed=config.seed, dimension=curve.dimension)
            if config.n >= 3 else 1.0
        )
        logger.info(
            f"Inscribed {config.n}-gon on {config.curve.curve_id}: side={result.side:.12g}, "
            f"distortion={distortion:.6g} (floor {floor:.6g})"
        )

        outcome = ExperimentOutcome(kind=config.kind.value, curve_id=config.curve.curve_id)
        outcome.tables.append(Table("inscribe", INSCRIBE_COLUMNS, [[
            config.n, config.x0, result.side, result.closing_residual, result.chord_spread,
            result.iterations, distortion, floor, len(result.sides),
        ]]))
        outcome.polygons["inscribe.polygon"] = result.polygon

        bound = settings.INSCRIBE_TOLERANCE * length(curve)
        outcome.checks.append(Check(
            "closing_residual", result.closing_residual <= bound,
            f"residual={result.closing_residual:.3e}, bound={bound:.3e}",
        ))
        outcome.checks.append(Check(
            "chord_spread", result.chord_spread <= CHORD_SPREAD_TOLERANCE,
            f"spread={result.chord_spread:.3e}",
        ))
        # empirical floor: reported only
        outcome.checks.append(Check(
            "distortion_at_least_one", distortion >= 1.0 - 1e-12, f"distortion={distortion:.6g}",
        ))
        return outcome
