"""Command-line entrypoint: ``python -m src.main <mode> --config <path> ...``."""

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from pydantic import ValidationError

from src.services.emitters import emit_csv, emit_json
from src.services.experiments import COMMANDS, run_experiment
from src.services.schemas import ExperimentConfig
from src.utils.errors import ConfigError, ConvergenceError, RelclockError
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def load_config_file(path: str) -> Dict[str, Any]:
    """Read a JSON or YAML config document into a plain dict."""

    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigError(f"config file not found: {path}")

    with open(config_path, encoding="utf-8") as handle:
        if config_path.suffix.lower() in (".yml", ".yaml"):
            data = yaml.safe_load(handle)
        else:
            try:
                data = json.load(handle)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"invalid JSON in {path}: {exc}") from exc

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping")
    return data


def equispaced(n: int) -> List[float]:
    """n plate values 2πi/n, i = 0..n-1."""

    return [2.0 * math.pi * i / n for i in range(n)]


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """CLI flags override config-file fields, which override Settings defaults."""

    data = load_config_file(args.config) if args.config else {}
    if "mode" in data and data["mode"] != args.mode:
        raise ConfigError(f"config file is for mode {data['mode']!r}, command is {args.mode!r}")
    data["mode"] = args.mode

    overrides = {
        "shots": args.shots,
        "exposure": args.exposure,
        "seed": args.seed,
        "output_path": args.out,
        "format": args.format,
    }
    data.update({key: value for key, value in overrides.items() if value is not None})
    if args.equispaced is not None:
        if args.equispaced < 1:
            raise ConfigError("--equispaced needs at least one point")
        data["plate_A_values"] = equispaced(args.equispaced)

    return ExperimentConfig(**data)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relclock",
        description="Exact simulator for clock-conditioned evolution in a static two-photon universe",
    )
    parser.add_argument("mode", choices=sorted(COMMANDS), help="Experiment to run")
    parser.add_argument("--config", help="JSON or YAML experiment config")
    parser.add_argument("--shots", type=int, help="Monte Carlo shots per point (0 = analytic only)")
    parser.add_argument("--exposure", type=int, help="Tomography shots per projection (0 = exact only)")
    parser.add_argument("--seed", type=int, help="Root seed")
    parser.add_argument("--out", help="Output path (stdout when omitted)")
    parser.add_argument("--format", choices=["csv", "json"], help="Output format")
    parser.add_argument("--equispaced", type=int, metavar="N", help="Use N equispaced plate-A values in [0, 2π)")
    parser.add_argument("--stamp", action="store_true", help="Add a UTC timestamp to the record")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG

    try:
        config = build_config(args)
    except (ValidationError, ConfigError) as exc:
        print(f"relclock: configuration error: {exc}", file=sys.stderr)  # noqa: T201
        return EXIT_CONFIG

    try:
        record = run_experiment(config, stamp=args.stamp)
        if config.format == "json":
            emit_json(record, config.output_path)
        else:
            emit_csv(record, config.output_path)
    except ConvergenceError as exc:
        logger.error("Reconstruction failed: %s", exc)
        return EXIT_RUNTIME
    except (OSError, RelclockError) as exc:
        logger.error("Run failed: %s", exc, exc_info=True)
        return EXIT_RUNTIME

    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
