"""
Experiments router - runs experiments over HTTP.
Part of Presentation layer.
"""
import logging

from fastapi import APIRouter, HTTPException, status

from app.application.use_cases.experiment_runner import ExperimentRunner
from app.domain.exceptions import ConfigError, KnotEnergyError
from app.domain.value_objects.experiment_config import ExperimentKind
from app.infrastructure.repositories.config_repository import ConfigRepository
from app.presentation.schemas.experiment import ExperimentRequest, ExperimentResponse

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/experiments", tags=["experiments"])


@router.get("")
def list_experiments():
    """Experiment kinds accepted by POST /experiments/{kind}."""
    return {"kinds": [kind.value for kind in ExperimentKind]}


@router.post("/{kind}", response_model=ExperimentResponse)
def run_experiment(kind: str, request: ExperimentRequest):
    """
    Run one experiment synchronously.
    Unknown kinds and invalid configurations return 400, numerical failures 422.
    """
    try:
        config = ConfigRepository().from_dict(
            {**request.parameters, "kind": kind, "curve": request.curve}
        )
    except ConfigError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))

    runner = ExperimentRunner()
    try:
        outcome = runner.execute(config)
    except ConfigError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    except (KnotEnergyError, ValueError) as e:
        logger.error(f"{kind} failed: {e}")
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=f"{type(e).__name__}: {e}",
        )

    paths = runner.write(config, outcome) if request.write_artifacts else []
    return ExperimentResponse(
        config_sha256=config.config_hash(),
        artifacts=[str(path) for path in paths],
        **outcome.to_dict(),
    )
