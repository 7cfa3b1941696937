"""
Command line interface.
Part of Presentation layer - one subcommand per experiment kind, plus `run` and `serve`.

    python -m app decompose --curve "torus_knot(2,3)" --grid 512 --out results/
    python -m app run --config experiments/gamma.json --jobs 4
"""
import argparse
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from app.application.use_cases.experiment_runner import EXIT_VALIDATION, ExperimentRunner
from app.core.config import settings
from app.core.logging import configure_logging
from app.domain.exceptions import ConfigError
from app.domain.value_objects.curve_spec import CurveSpec
from app.domain.value_objects.experiment_config import ExperimentConfig, ExperimentKind
from app.infrastructure.repositories.config_repository import ConfigRepository
from app.infrastructure.repositories.curve_repository import CurveRepository, validation_to_config_error

logger = logging.getLogger(__name__)


def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'") from exc


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from exc


def parse_center(text: str) -> Dict[str, Any]:
    """'on-curve:T', 'point:x,y[,z...]' or 'random' as config fields."""
    mode, _, value = text.partition(":")
    try:
        if mode == "on-curve":
            return {"center_mode": "on-curve", "center_t0": float(value or 0.0)}
        if mode == "point":
            return {"center_mode": "point", "center_point": _float_list(value)}
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise ConfigError(str(exc), field="center") from exc
    if mode == "random" and not value:
        return {"center_mode": "random"}
    raise ConfigError(f"expected on-curve:T, point:x,y,z or random, got '{text}'", field="center")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="knotlab", description="Knot energy experiments")
    parser.add_argument("--version", action="version", version=f"{settings.APP_NAME} {settings.APP_VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment config")
    common.add_argument("--curve", help="curve spec file, or an inline kind such as 'torus_knot(2,3)'")
    common.add_argument("--out", dest="output_dir", help="output directory for CSV artifacts")
    common.add_argument("--jobs", type=int, help="threads for independent cells")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--grid", type=int, help="quadrature grid N_x = N_w")
    common.add_argument("--tolerance", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--no-assert", dest="assert_tolerances", action="store_false", default=None,
                        help="report tolerance checks without failing the run")

    for kind in ExperimentKind:
        sub = commands.add_parser(kind.value, parents=[common], help=f"{kind.value} experiment")
        sub.set_defaults(kind=kind.value)
        if kind in (ExperimentKind.MOLLIFY_SWEEP, ExperimentKind.REPARAM_CONVERGE, ExperimentKind.ENERGY_CONVERGE):
            sub.add_argument("--eps", dest="eps_list", type=_float_list)
        if kind == ExperimentKind.GAMMA_SWEEP:
            sub.add_argument("--m", dest="m_list", type=_int_list)
            sub.add_argument("--mollify-first", dest="mollify_first", action="store_true", default=None)
        if kind == ExperimentKind.INSCRIBE:
            sub.add_argument("--n", type=int)
            sub.add_argument("--x0", type=float)
        if kind == ExperimentKind.INVERT:
            sub.add_argument("--center", help="on-curve:T | point:x,y,z | random")
            sub.add_argument("--radius", dest="inversion_radius", type=float)
            sub.add_argument("--rdom", dest="r_dom", type=float)
        if kind == ExperimentKind.SOBOLEV:
            sub.add_argument("--r", dest="r_list", type=_float_list)

    run = commands.add_parser("run", parents=[common], help="run the experiment a config file names")
    run.set_defaults(kind=None)

    serve = commands.add_parser("serve", help="start the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _curve_spec(text: str, curves: CurveRepository) -> CurveSpec:
    if Path(text).is_file():
        return curves.load_spec(text)
    return curves.parse_spec(f"kind = {text}")


def build_config(args: argparse.Namespace, curves: Optional[CurveRepository] = None) -> ExperimentConfig:
    """Merge the config file (if any) with command line flags."""
    curves = curves or CurveRepository()
    overrides: Dict[str, Any] = {
        key: getattr(args, key, None)
        for key in (
            "output_dir", "jobs", "tolerance", "seed", "assert_tolerances", "eps_list", "m_list",
            "mollify_first", "n", "x0", "inversion_radius", "r_dom", "r_list",
        )
    }
    if args.grid is not None:
        overrides["grid_x"] = overrides["grid_w"] = args.grid
    if getattr(args, "center", None):
        overrides.update(parse_center(args.center))
    if args.curve:
        overrides["curve"] = _curve_spec(args.curve, curves).model_dump()

    repository = ConfigRepository()
    if args.config:
        config = repository.load(args.config, overrides)
        if args.kind is not None and config.kind.value != args.kind:
            raise ConfigError(
                f"config describes '{config.kind.value}', not '{args.kind}'", field="kind"
            )
        return config
    if args.kind is None:
        raise ConfigError("'run' needs --config")
    if "curve" not in overrides:
        raise ConfigError("give --curve or --config", field="curve")
    return repository.from_dict({"kind": args.kind}, overrides)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        configure_logging()
        uvicorn.run("app.main:app", host=args.host, port=args.port)
        return 0

    configure_logging("DEBUG" if args.verbose > 1 else "INFO" if args.verbose else None)
    try:
        config = build_config(args)
    except ConfigError as exc:
        logger.error(f"Invalid configuration: {exc}")
        return EXIT_VALIDATION
    except ValidationError as exc:
        logger.error(f"Invalid configuration: {validation_to_config_error(exc)}")
        return EXIT_VALIDATION

    result = ExperimentRunner().run(config)
    if result.error:
        logger.error(result.error)
    for path in result.paths:
        print(path)
    return result.exit_code
