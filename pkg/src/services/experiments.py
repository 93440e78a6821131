"""The three sweep commands: observer and super-observer PaW runs and the GPPT curve."""

from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from typing import Callable, Dict, List, Sequence, TypeVar

import numpy as np
import scipy

from src.core.operations import fidelity_pure
from src.gppt.models import DelaySetting
from src.gppt.two_time import curve_visibility, theory_curve, two_time_conditional
from src.optics.models import ShotConfig
from src.optics.monte_carlo import estimate_conditionals, sample_shots
from src.paw.mechanism import DETECTOR_PAIRS, make_singlet, observer_conditionals, observer_clock_view, superobserver_erased_state
from src.paw.models import ClockParams
from src.services.schemas import RELCLOCK_VERSION, Cell, ExperimentConfig, RunRecord
from src.tomography.projections import standard_16_settings
from src.tomography.reconstruction import fidelity_report, reconstruct_mle, simulate_counts
from src.utils.config import settings
from src.utils.errors import ConfigError
from src.utils.logger import setup_logger
from src.utils.rng import derive_seed

logger = setup_logger(__name__)

T = TypeVar("T")
Row = Dict[str, Cell]

CONDITIONAL_COLUMNS = [f"P{j}g{k}" for j, k in DETECTOR_PAIRS]


def _map_points(work: Callable[[int, float], T], values: Sequence[float]) -> List[T]:
    """Run ``work(index, value)`` for every point; results keep point order."""

    indexed = list(enumerate(values))
    if settings.max_workers <= 1 or len(indexed) <= 1:
        return [work(i, v) for i, v in indexed]
    with ThreadPoolExecutor(max_workers=settings.max_workers) as executor:
        return list(executor.map(lambda item: work(*item), indexed))


def _record(config: ExperimentConfig, columns: List[str], points: List[Row], summary: Row, stamp: bool) -> RunRecord:
    return RunRecord(
        config=config,
        columns=columns,
        points=points,
        summary=summary,
        versions={"relclock": RELCLOCK_VERSION, "numpy": np.__version__, "scipy": scipy.__version__},
        timestamp=datetime.now(timezone.utc).isoformat() if stamp else None,
    )


def _require_mode(config: ExperimentConfig, mode: str) -> None:
    if config.mode != mode:
        raise ConfigError(f"config mode {config.mode!r} cannot run the {mode} command")


def _clock(config: ExperimentConfig) -> ClockParams:
    return ClockParams(omega=config.omega, t1=config.t1)


# ------------------------------------------------------------------
# Observer mode
# ------------------------------------------------------------------


def cmd_paw_observer(config: ExperimentConfig, stamp: bool = False) -> RunRecord:
    """Analytic P(j|k) per plate value, plus shot estimates when ``shots > 0``."""

    _require_mode(config, "paw-observer")
    clock = _clock(config)
    state = make_singlet(clock)

    columns = ["plate_A_rad", *CONDITIONAL_COLUMNS]
    if config.shots > 0:
        columns += [f"{name}_{suffix}" for name in CONDITIONAL_COLUMNS for suffix in ("hat", "err")]

    def point(index: int, plate_A: float):
        # plate thickness δ = ωT
        table = observer_conditionals(state, plate_A / config.omega)
        row: Row = {"plate_A_rad": plate_A, **table.as_row()}
        if config.shots > 0:
            shots = ShotConfig(
                n_shots=config.shots,
                seed=derive_seed(config.seed, index),
                mode="paw-observer",
                plate_A_list=[plate_A],
                omega=config.omega,
            )
            estimates = estimate_conditionals(sample_shots(shots, max_workers=1))
            for name, (j, k) in zip(CONDITIONAL_COLUMNS, DETECTOR_PAIRS):
                estimate = estimates.get(j, k)
                row[f"{name}_hat"] = estimate.p_hat
                row[f"{name}_err"] = estimate.stderr
        logger.debug("[paw-observer] point %d plate_A=%.6f", index, plate_A)
        return table, row

    logger.info("[paw-observer] %d points, shots=%d", len(config.plate_A_values), config.shots)
    results = _map_points(point, config.plate_A_values)

    view = observer_clock_view([table for table, _ in results], clock)
    return _record(config, columns, [row for _, row in results], view, stamp)


# ------------------------------------------------------------------
# Super-observer mode
# ------------------------------------------------------------------


def cmd_paw_superobserver(config: ExperimentConfig, stamp: bool = False) -> RunRecord:
    """Erased-state fidelity per plate value; simulated tomography + MLE when ``exposure > 0``."""

    _require_mode(config, "paw-superobserver")
    state = make_singlet(_clock(config))
    tomography_settings = standard_16_settings()

    columns = ["plate_A_rad", "fidelity_exact", "postselect_prob"]
    if config.exposure > 0:
        columns += ["fidelity_mle", "mle_iterations"]

    def point(index: int, plate_A: float) -> Row:
        rho_out, probability = superobserver_erased_state(state, plate_A / config.omega, config.chi)
        row: Row = {
            "plate_A_rad": plate_A,
            "fidelity_exact": fidelity_pure(rho_out, state.psi),
            "postselect_prob": probability,
        }
        if config.exposure > 0:
            data = simulate_counts(
                rho_out,
                tomography_settings,
                config.exposure,
                derive_seed(config.seed, index),
                config.count_model,
            )
            result = reconstruct_mle(data)
            row["fidelity_mle"] = fidelity_report(result, state.psi)
            row["mle_iterations"] = result.iterations
        logger.debug("[paw-superobserver] point %d F=%.12f", index, row["fidelity_exact"])
        return row

    logger.info("[paw-superobserver] %d points, exposure=%d", len(config.plate_A_values), config.exposure)
    points = _map_points(point, config.plate_A_values)

    summary: Row = _min_mean(points, "fidelity_exact")
    if config.exposure > 0:
        summary.update(_min_mean(points, "fidelity_mle"))
    return _record(config, columns, points, summary, stamp)


def _min_mean(points: List[Row], column: str) -> Row:
    values = [row[column] for row in points]
    return {f"{column}_min": float(min(values)), f"{column}_mean": float(np.mean(values))}


# ------------------------------------------------------------------
# GPPT two-time curve
# ------------------------------------------------------------------


def cmd_gppt(config: ExperimentConfig, stamp: bool = False) -> RunRecord:
    """p(3|t1+τ), p(3|t2+τ) per plate-B delay: closed form, quadrature, optional shots."""

    _require_mode(config, "gppt")
    clock = _clock(config)

    columns = ["delta_B_rad", "t_plus_tau_1", "p3_t1", "t_plus_tau_2", "p3_t2", "p3_t1_quad", "p3_t2_quad"]
    if config.shots > 0:
        columns += ["p3_t1_hat", "p3_t1_err", "p3_t2_hat", "p3_t2_err"]

    def point(index: int, delta_B: float) -> Row:
        tau = DelaySetting.from_delta(delta_B, config.omega).tau
        row: Row = {"delta_B_rad": delta_B}
        for k in (1, 2):
            row[f"t_plus_tau_{k}"] = clock.reading(k) + tau
            row[f"p3_t{k}"] = two_time_conditional(k, tau, method="closed", omega=config.omega)
        for k in (1, 2):
            row[f"p3_t{k}_quad"] = two_time_conditional(
                k, tau, method="quadrature", n_nodes=config.quadrature_nodes, omega=config.omega
            )
        if config.shots > 0:
            shots = ShotConfig(
                n_shots=config.shots,
                seed=derive_seed(config.seed, index),
                mode="gppt",
                plate_A_list=config.plate_A_values,
                delta_B=delta_B,
                omega=config.omega,
                plate_distribution=config.sampled_plates,
            )
            estimates = estimate_conditionals(sample_shots(shots, max_workers=1))
            for k in (1, 2):
                row[f"p3_t{k}_hat"] = estimates.get(3, k).p_hat
                row[f"p3_t{k}_err"] = estimates.get(3, k).stderr
        logger.debug("[gppt] point %d delta_B=%.6f", index, delta_B)
        return row

    logger.info("[gppt] %d delays, shots=%d", len(config.delta_B_values), config.shots)
    points = _map_points(point, config.delta_B_values)

    taus = [DelaySetting.from_delta(d, config.omega).tau for d in config.delta_B_values]
    curve = theory_curve(taus, clock)
    values = [p.p for p in curve]
    summary: Row = {"p_max": max(values), "p_min": min(values), "visibility": curve_visibility(curve)}
    return _record(config, columns, points, summary, stamp)


COMMANDS: Dict[str, Callable[..., RunRecord]] = {
    "paw-observer": cmd_paw_observer,
    "paw-superobserver": cmd_paw_superobserver,
    "gppt": cmd_gppt,
}


def run_experiment(config: ExperimentConfig, stamp: bool = False) -> RunRecord:
    return COMMANDS[config.mode](config, stamp=stamp)
