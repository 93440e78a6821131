"""Shot-level sampling of the detector layer.

Each shot picks a plate-A thickness, then one outcome among the four
coincidences (j, k) and the PBS₁ discard, from exact Born probabilities.
Shots are cut into blocks of SHOT_BLOCK_SIZE; block b draws from the
counter-based stream (seed, b), so shot i is fixed by (seed, i) and blocks may
run in any order. The block size is part of the stream layout and is not
configurable.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Optional, Tuple, Union

import numpy as np

from src.core.operations import waveplate_matrix
from src.core.states import Ket
from src.gppt.two_time import project_initial_time, projected_initial_state
from src.optics.models import (
    CoincidenceTable,
    ConditionalEstimates,
    EstimatedConditional,
    SamplingMode,
    ShotConfig,
)
from src.paw.mechanism import DETECTOR_PAIRS, detector_index, global_unitary, make_singlet
from src.utils.config import settings
from src.utils.logger import setup_logger
from src.utils.rng import stream

logger = setup_logger(__name__)

OutcomeKey = Union[Tuple[int, int], str]
OUTCOMES: Tuple[OutcomeKey, ...] = DETECTOR_PAIRS + ("discard",)
ZERO_BELOW = 1e-15
SHOT_BLOCK_SIZE = 4096


def outcome_table(
    mode: SamplingMode,
    plates: np.ndarray,
    delta_B: float = 0.0,
    state: Optional[Ket] = None,
) -> np.ndarray:
    """Outcome probabilities for an array of plate thicknesses, shape (n, 5) in OUTCOMES order."""

    plates = np.atleast_1d(np.asarray(plates, dtype=float))
    probabilities = np.zeros((plates.shape[0], len(OUTCOMES)))

    if mode == "paw-observer":
        psi = (state or make_singlet().psi).amplitudes
        plate = waveplate_matrix(plates)
        both_arms = np.einsum("nab,ncd->nacbd", plate, plate).reshape(-1, 4, 4)
        joint = np.abs(both_arms @ psi) ** 2
        kept = 1.0
    elif mode == "gppt":
        initial = project_initial_time(state or projected_initial_state())
        if initial.is_null:
            probabilities[:, -1] = 1.0
            return probabilities
        joint = np.abs(global_unitary(1.0, plates, delta_B) @ initial.ket.amplitudes) ** 2
        kept = initial.probability
    else:
        raise ValueError(f"Unknown sampling mode: {mode}")

    for column, (j, k) in enumerate(DETECTOR_PAIRS):
        probabilities[:, column] = kept * joint[:, detector_index(j, k)]
    probabilities[:, -1] = 1.0 - kept

    probabilities[probabilities < ZERO_BELOW] = 0.0
    return probabilities / probabilities.sum(axis=1, keepdims=True)


def outcome_distribution(
    mode: SamplingMode,
    plate_A: float,
    delta_B: float = 0.0,
    state: Optional[Ket] = None,
) -> Dict[OutcomeKey, float]:
    """Probabilities of the four coincidences and the discard for one plate."""

    row = outcome_table(mode, np.array([plate_A]), delta_B, state)[0]
    return {key: float(value) for key, value in zip(OUTCOMES, row)}


def _sample_block(config: ShotConfig, cumulative: Optional[np.ndarray], block: int, size: int) -> np.ndarray:
    rng = stream(config.seed, block)
    if config.plate_distribution == "list":
        rows = cumulative[rng.integers(len(config.plate_A_list), size=size)]
    else:
        plates = rng.uniform(0.0, 2.0 * math.pi, size=size)
        rows = _cumulative(outcome_table(config.mode, plates, config.delta_B))
    draws = rng.random(size)
    outcomes = np.sum(rows <= draws[:, None], axis=1)
    return np.bincount(outcomes, minlength=len(OUTCOMES)).astype(np.int64)


def _cumulative(probabilities: np.ndarray) -> np.ndarray:
    cumulative = np.cumsum(probabilities, axis=1)
    cumulative[:, -1] = 1.0
    return cumulative


def sample_shots(config: ShotConfig, max_workers: Optional[int] = None) -> CoincidenceTable:
    """Draw ``config.n_shots`` coincidence events and accumulate them."""

    n_blocks = -(-config.n_shots // SHOT_BLOCK_SIZE)
    sizes = [min(SHOT_BLOCK_SIZE, config.n_shots - b * SHOT_BLOCK_SIZE) for b in range(n_blocks)]

    cumulative = None
    if config.plate_distribution == "list":
        cumulative = _cumulative(outcome_table(config.mode, np.array(config.plate_A_list), config.delta_B))

    workers = max_workers or settings.max_workers
    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            blocks = list(executor.map(lambda b: _sample_block(config, cumulative, b, sizes[b]), range(n_blocks)))
    else:
        blocks = [_sample_block(config, cumulative, b, sizes[b]) for b in range(n_blocks)]

    counts = np.sum(blocks, axis=0)
    logger.debug("[%s] Sampled %d shots in %d blocks (seed=%d)", config.mode, config.n_shots, n_blocks, config.seed)

    return CoincidenceTable(
        n31=int(counts[0]),
        n32=int(counts[1]),
        n41=int(counts[2]),
        n42=int(counts[3]),
        discarded=int(counts[4]),
        n_shots=config.n_shots,
        seed=config.seed,
    )


def estimate_conditionals(table: CoincidenceTable) -> ConditionalEstimates:
    """P̂(j|k) = N_jk / (N_3k + N_4k) with binomial standard errors."""

    estimates = {}
    for j, k in DETECTOR_PAIRS:
        column = table.count(3, k) + table.count(4, k)
        estimates[f"p{j}g{k}"] = EstimatedConditional.from_counts(table.count(j, k), column)
    return ConditionalEstimates(**estimates)
