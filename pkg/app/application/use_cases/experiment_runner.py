"""
Experiment runner.
Part of Application layer - builds the curve, dispatches on the experiment kind
and writes CSV artifacts with provenance.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from app.application.use_cases.approximation_use_cases import ApproximationUseCases
from app.application.use_cases.energy_use_cases import EnergyUseCases
from app.application.use_cases.inversion_use_cases import InversionUseCases
from app.application.use_cases.outcome import ExperimentOutcome
from app.application.use_cases.polygon_use_cases import PolygonUseCases
from app.domain.entities.curve import ClosedCurve
from app.domain.exceptions import ConfigError, KnotEnergyError
from app.domain.value_objects.experiment_config import ExperimentConfig, ExperimentKind
from app.infrastructure.repositories.artifact_repository import ArtifactRepository
from app.infrastructure.repositories.curve_repository import CurveRepository, validation_to_config_error

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

Handler = Callable[[ExperimentConfig, ClosedCurve], ExperimentOutcome]


@dataclass
class RunResult:
    exit_code: int
    outcome: Optional[ExperimentOutcome] = None
    paths: List[Path] = field(default_factory=list)
    error: Optional[str] = None


class ExperimentRunner:
    """
    Runs one configured experiment end to end.
    `execute` returns the outcome in memory; `run` also writes it and maps failures to exit codes.
    """

    def __init__(self, curves: Optional[CurveRepository] = None):
        self.curves = curves or CurveRepository()

    def _handlers(self, jobs: int) -> Dict[ExperimentKind, Handler]:
        energy = EnergyUseCases(jobs)
        approximation = ApproximationUseCases(jobs)
        polygons = PolygonUseCases(jobs)
        inversions = InversionUseCases(jobs)
        return {
            ExperimentKind.ENERGY: energy.energy,
            ExperimentKind.DECOMPOSE: energy.decompose,
            ExperimentKind.ENERGY_CONVERGE: energy.energy_converge,
            ExperimentKind.MOLLIFY_SWEEP: approximation.mollify_sweep,
            ExperimentKind.REPARAM_CONVERGE: approximation.reparam_converge,
            ExperimentKind.SOBOLEV: approximation.sobolev,
            ExperimentKind.GAMMA_SWEEP: polygons.gamma_sweep,
            ExperimentKind.INSCRIBE: polygons.inscribe,
            ExperimentKind.INVERT: inversions.invert,
        }

    def execute(self, config: ExperimentConfig) -> ExperimentOutcome:
        """Build the curve and run the experiment; raises on any failure."""
        curve = self.curves.build(config.curve)
        logger.info(f"Running {config.kind.value} on {config.curve.curve_id} (jobs={config.jobs})")
        outcome = self._handlers(config.jobs)[config.kind](config, curve)
        for check in outcome.checks:
            if not check.passed:
                logger.warning(f"Check {check.name} failed: {check.detail}")
        return outcome

    def write(self, config: ExperimentConfig, outcome: ExperimentOutcome,
              output_dir: Optional[str] = None) -> List[Path]:
        artifacts = ArtifactRepository(output_dir or config.output_dir)
        paths = [artifacts.write_config(config)]
        for table in outcome.tables:
            paths.append(artifacts.write_table(table.name, table.columns, table.rows, config))
        paths.append(artifacts.write_table(
            f"{config.kind.value}.checks", ["check", "passed", "detail"],
            [[c.name, c.passed, c.detail] for c in outcome.checks], config,
        ))
        for name, curve in outcome.closed_curves.items():
            paths.append(artifacts.write_closed_curve(name, curve, config))
        for name, curve in outcome.open_curves.items():
            paths.append(artifacts.write_open_curve(name, curve, config))
        for name, polygon in outcome.polygons.items():
            paths.append(artifacts.write_polygon(name, polygon, config))
        return paths

    def run(self, config: ExperimentConfig, output_dir: Optional[str] = None) -> RunResult:
        """Execute, write artifacts and return the exit status."""
        try:
            outcome = self.execute(config)
        except ConfigError as exc:
            logger.error(f"Invalid configuration: {exc}")
            return RunResult(exit_code=EXIT_VALIDATION, error=str(exc))
        except ValidationError as exc:
            error = validation_to_config_error(exc)
            logger.error(f"Invalid configuration: {error}")
            return RunResult(exit_code=EXIT_VALIDATION, error=str(error))
        except KnotEnergyError as exc:
            logger.error(f"{config.kind.value} failed: {type(exc).__name__}: {exc}")
            return RunResult(exit_code=EXIT_NUMERICAL, error=f"{type(exc).__name__}: {exc}")
        except ValueError as exc:
            logger.error(f"{config.kind.value} failed: {exc}")
            return RunResult(exit_code=EXIT_NUMERICAL, error=str(exc))

        paths = self.write(config, outcome, output_dir)
        if config.assert_tolerances and not outcome.passed:
            failed = ", ".join(c.name for c in outcome.checks if not c.passed)
            return RunResult(exit_code=EXIT_NUMERICAL, outcome=outcome, paths=paths,
                             error=f"Tolerance checks failed: {failed}")
        return RunResult(exit_code=EXIT_OK, outcome=outcome, paths=paths)
