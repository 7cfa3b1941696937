"""
Energy use cases.
Part of Application layer - the energy, decompose and energy-converge experiments.
"""
import logging
import math

from app.application.use_cases.outcome import Check, ExperimentOutcome, Table, decreasing, map_cells
from app.domain.entities.curve import ClosedCurve
from app.domain.entities.energy import EnergyReport, QuadratureSpec
from app.domain.services.energies import energy_report
from app.domain.services.mobius_transform import circle_fit_residual
from app.domain.services.mollify import mollify
from app.domain.value_objects.experiment_config import ExperimentConfig

logger = logging.getLogger(__name__)

ENERGY_COLUMNS = [
    "curve_id", "N_x", "N_w", "e_mobius", "e1", "e2", "residual", "tail_estimate", "remainder_estimate",
]
CONVERGE_COLUMNS = ["epsilon", "e_mobius", "e1", "e2", "d_mobius", "d_e1", "d_e2", "remainder_estimate"]

# Differences below this are quadrature noise and do not break a decreasing trend
NOISE_FLOOR = 1e-8
RIGIDITY_GAP = 1e-2
RIGIDITY_RESIDUAL = 1e-3


def quadrature_spec(config: ExperimentConfig) -> QuadratureSpec:
    return QuadratureSpec.create(
        config.grid_x, config.grid_w, config.diagonal_policy, config.band, config.tolerance
    )


def energy_row(curve_id: str, report: EnergyReport) -> list:
    return [
        curve_id, report.spec.nx, report.spec.nw, report.e_mobius, report.e1, report.e2,
        report.residual, report.tail_estimate, report.remainder_estimate,
    ]


class EnergyUseCases:
    """
    Use cases for the Moebius energy and its decomposition.
    Cells of a sweep run on up to `jobs` threads.
    """

    def __init__(self, jobs: int = 1):
        self.jobs = jobs

    # ==================== Single curve ====================

    def energy(self, config: ExperimentConfig, curve: ClosedCurve) -> ExperimentOutcome:
        """E_mob, E1 and E2 of one curve."""
        curve_id = config.curve.curve_id
        report = energy_report(curve, quadrature_spec(config))
        logger.info(f"Energy of {curve_id}: E_mob={report.e_mobius:.10g}")

        slack = max(config.tolerance, report.remainder_estimate)
        outcome = ExperimentOutcome(kind=config.kind.value, curve_id=curve_id)
        outcome.tables.append(Table("energy", ENERGY_COLUMNS, [energy_row(curve_id, report)]))
        outcome.checks.append(Check(
            "e_mobius_nonnegative",
            report.e_mobius >= -slack,
            f"e_mobius={report.e_mobius:.6g}, slack={slack:.2e}",
        ))
        return outcome

    def decompose(self, config: ExperimentConfig, curve: ClosedCurve) -> ExperimentOutcome:
        """Energies plus the decomposition residual and the lower bound E1 >= 2 pi^2."""
        outcome = self.energy(config, curve)
        outcome.tables[0].name = "decompose"
        _, _, _, e_mobius, e1, e2, residual, _, remainder = outcome.tables[0].rows[0]

        holds = abs(residual) <= max(config.tolerance, 3.0 * remainder)
        outcome.checks.append(Check(
            "decomposition_residual", holds,
            f"|E_mob - E1 - E2 - 4| = {abs(residual):.3e}, tolerance {config.tolerance:g}",
        ))
        floor = 2.0 * math.pi ** 2 - max(config.tolerance, remainder)
        outcome.checks.append(Check("e1_lower_bound", e1 >= floor, f"e1={e1:.10g} against 2pi^2"))
        if abs(e1 - 2.0 * math.pi ** 2) <= RIGIDITY_GAP:
            # E1 at its minimum only on round circles
            deviation = circle_fit_residual(curve.samples)
            outcome.checks.append(Check(
                "e1_rigidity", deviation <= RIGIDITY_RESIDUAL, f"circle fit residual {deviation:.3e}",
            ))
        if not holds:
            logger.warning(f"Decomposition residual {residual:.3e} on {config.curve.curve_id}")
        return outcome

    # ==================== Sweeps ====================

    def energy_converge(self, config: ExperimentConfig, curve: ClosedCurve) -> ExperimentOutcome:
        """Energy differences between gamma_eps and gamma along the eps list."""
        spec = quadrature_spec(config)
        base = energy_report(curve, spec)

        def cell(eps: float) -> list:
            report = energy_report(mollify(curve, eps), spec)
            return [
                eps, report.e_mobius, report.e1, report.e2,
                abs(report.e_mobius - base.e_mobius), abs(report.e1 - base.e1), abs(report.e2 - base.e2),
                report.remainder_estimate + base.remainder_estimate,
            ]

        rows = map_cells(cell, config.eps_list, self.jobs)
        outcome = ExperimentOutcome(kind=config.kind.value, curve_id=config.curve.curve_id)
        outcome.tables.append(Table("energy-converge", CONVERGE_COLUMNS, rows))

        ordered = sorted(rows, key=lambda row: row[0], reverse=True)
        for index, name in ((4, "d_mobius"), (5, "d_e1"), (6, "d_e2")):
            column = [row[index] for row in ordered]
            outcome.checks.append(Check(
                f"{name}_decreasing", decreasing(column, NOISE_FLOOR), f"{name}={column}",
            ))
            final = column[-1]
            bound = config.tolerance + ordered[-1][7]
            outcome.checks.append(Check(
                f"{name}_final", final <= bound,
                f"{name} at eps={ordered[-1][0]:g}: {final:.3e} (bound {bound:.2e})",
            ))
        return outcome
