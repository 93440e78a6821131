"""Count simulation and state reconstruction for the 16-projection tomography."""

from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize

from src.core.operations import fidelity_pure
from src.core.states import PSD_TOL, DensityMatrix, Ket
from src.tomography.models import CountModel, ReconstructionResult, TomographyData
from src.tomography.projections import ProjectionSetting, linear_inversion, projector_stack
from src.utils.config import settings as app_settings
from src.utils.errors import ConvergenceError
from src.utils.logger import setup_logger
from src.utils.rng import stream

logger = setup_logger(__name__)

PROB_CLIP = 1e-12
START_MIXING = 1e-3
LOWER_INDICES: Tuple[Tuple[int, int], ...] = ((1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2))

MatrixLike = Union[DensityMatrix, np.ndarray]


def _as_matrix(rho: MatrixLike) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=np.complex128)


# ------------------------------------------------------------------
# Forward model
# ------------------------------------------------------------------


def born_probabilities(rho: MatrixLike, settings: Sequence[ProjectionSetting]) -> np.ndarray:
    """pᵢ = Tr[Πᵢ ρ], clipped to [0, 1]."""

    values = np.einsum("nab,ba->n", projector_stack(settings), _as_matrix(rho)).real
    return np.clip(values, 0.0, 1.0)


def simulate_counts(
    rho: MatrixLike,
    settings: Sequence[ProjectionSetting],
    exposure: int,
    seed: int,
    count_model: CountModel = "binomial",
) -> TomographyData:
    """Independent counts per setting; setting i draws from the stream (seed, i)."""

    if exposure < 1:
        raise ValueError("exposure must be >= 1")

    probabilities = born_probabilities(rho, settings)
    counts = []
    for index, p in enumerate(probabilities):
        rng = stream(seed, index)
        if count_model == "binomial":
            counts.append(int(rng.binomial(exposure, p)))
        else:
            counts.append(int(rng.poisson(exposure * p)))

    return TomographyData(settings=list(settings), counts=counts, exposure=exposure, count_model=count_model)


def log_likelihood(rho: MatrixLike, data: TomographyData) -> float:
    """Binomial or Poisson log-likelihood of ``data`` under ``rho`` (constant terms dropped)."""

    p = np.clip(born_probabilities(rho, data.settings), PROB_CLIP, 1.0 - PROB_CLIP)
    n = np.asarray(data.counts, dtype=float)
    exposure = float(data.exposure)
    if data.count_model == "binomial":
        return float(np.sum(n * np.log(p) + (exposure - n) * np.log1p(-p)))
    return float(np.sum(n * np.log(exposure * p) - exposure * p))


def _likelihood_weights(p: np.ndarray, data: TomographyData) -> np.ndarray:
    n = np.asarray(data.counts, dtype=float)
    if data.count_model == "binomial":
        return n / p - (data.exposure - n) / (1.0 - p)
    return n / p - data.exposure


# ------------------------------------------------------------------
# Linear inversion
# ------------------------------------------------------------------


def project_to_physical(matrix: np.ndarray) -> np.ndarray:
    """Closest PSD unit-trace matrix: eigenvalues projected onto the probability simplex."""

    hermitian = (matrix + matrix.conj().T) / 2
    eigenvalues, eigenvectors = np.linalg.eigh(hermitian)

    descending = eigenvalues[::-1]
    steps = np.arange(1, len(descending) + 1)
    shifted = descending - (np.cumsum(descending) - 1.0) / steps
    support = int(steps[shifted > 0].max())
    offset = (descending[:support].sum() - 1.0) / support
    projected = np.maximum(eigenvalues - offset, 0.0)

    return (eigenvectors * projected) @ eigenvectors.conj().T


def reconstruct_linear(data: TomographyData) -> ReconstructionResult:
    matrix = linear_inversion(data.frequencies, data.settings)
    rho = DensityMatrix.unchecked(matrix)
    min_eig = rho.min_eigenvalue()
    if min_eig < -PSD_TOL:
        logger.debug("Linear reconstruction is unphysical (min eigenvalue %.3e)", min_eig)
    return ReconstructionResult(
        rho=rho,
        method="linear",
        physical=min_eig >= -PSD_TOL,
        min_eigenvalue=min_eig,
    )


# ------------------------------------------------------------------
# Maximum likelihood
# ------------------------------------------------------------------


def _params_from_cholesky(T: np.ndarray) -> np.ndarray:
    params = np.zeros(16)
    params[:4] = np.diag(T).real
    for i, (r, c) in enumerate(LOWER_INDICES):
        params[4 + 2 * i] = T[r, c].real
        params[5 + 2 * i] = T[r, c].imag
    return params


def _cholesky_from_params(params: np.ndarray) -> np.ndarray:
    T = np.diag(params[:4]).astype(np.complex128)
    for i, (r, c) in enumerate(LOWER_INDICES):
        T[r, c] = params[4 + 2 * i] + 1j * params[5 + 2 * i]
    return T


def _rho_from_params(params: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
    T = _cholesky_from_params(params)
    A = T @ T.conj().T
    trace = float(np.trace(A).real)
    return T, A / trace, trace


def _objective(params: np.ndarray, data: TomographyData, projectors: np.ndarray, scale: float):
    """Negative per-count log-likelihood and its gradient in the Cholesky parameters."""

    T, rho, trace = _rho_from_params(params)
    p = np.clip(np.einsum("nab,ba->n", projectors, rho).real, PROB_CLIP, 1.0 - PROB_CLIP)
    value = log_likelihood(rho, data)

    G = np.einsum("n,nab->ab", _likelihood_weights(p, data), projectors)
    G_shifted = (G - np.trace(G @ rho).real * np.eye(4)) / trace
    M = T.conj().T @ G_shifted

    gradient = np.zeros(16)
    gradient[:4] = 2.0 * np.diag(M).real
    for i, (r, c) in enumerate(LOWER_INDICES):
        gradient[4 + 2 * i] = 2.0 * M[c, r].real
        gradient[5 + 2 * i] = -2.0 * M[c, r].imag

    return -value / scale, -gradient / scale


def reconstruct_mle(
    data: TomographyData,
    max_iterations: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> ReconstructionResult:
    """Maximum-likelihood state over ρ = TT†/Tr(TT†), T lower triangular.

    Starts from the projected linear estimate, slightly mixed so the Cholesky
    factor exists. Stops when the per-count log-likelihood improves by less than
    ``tolerance`` in one iteration; hitting ``max_iterations`` first raises
    ConvergenceError.
    """

    max_iterations = max_iterations or app_settings.mle_max_iterations
    tolerance = tolerance if tolerance is not None else app_settings.mle_tolerance

    projectors = projector_stack(data.settings)
    scale = float(len(data.counts) * data.exposure)

    projected = project_to_physical(linear_inversion(data.frequencies, data.settings))
    start = (1.0 - START_MIXING) * projected + START_MIXING * np.eye(4) / 4
    params0 = _params_from_cholesky(np.linalg.cholesky(start))

    history: List[float] = [log_likelihood(start, data) / scale]
    converged = False

    def track(intermediate_result) -> None:
        nonlocal converged
        history.append(-float(intermediate_result.fun))
        if history[-1] - history[-2] < tolerance:
            converged = True
            raise StopIteration

    result = minimize(
        _objective,
        params0,
        args=(data, projectors, scale),
        jac=True,
        method="BFGS",
        callback=track,
        options={"maxiter": max_iterations, "gtol": 1e-12},
    )

    iterations = len(history) - 1
    gradient_norm = float(np.linalg.norm(result.jac)) if result.jac is not None else None
    # status 2: line search lost precision at the optimum
    converged = converged or result.status in (0, 2)
    if not converged:
        logger.error("MLE did not converge after %d iterations: %s", iterations, result.message)
        raise ConvergenceError("maximum-likelihood reconstruction did not converge", iterations, gradient_norm)

    _, rho_mle, _ = _rho_from_params(result.x)
    rho_mle = (rho_mle + rho_mle.conj().T) / 2
    best = log_likelihood(rho_mle, data)

    baseline = log_likelihood(projected, data)
    if baseline > best:
        rho_mle, best = projected, baseline

    logger.debug("MLE finished after %d iterations, log-likelihood %.6f", iterations, best)
    rho = DensityMatrix(matrix=rho_mle)
    return ReconstructionResult(
        rho=rho,
        method="mle",
        physical=True,
        min_eigenvalue=rho.min_eigenvalue(),
        log_likelihood=best,
        iterations=iterations,
        gradient_norm=gradient_norm,
        history=[value * scale for value in history],
    )


def fidelity_report(result: ReconstructionResult, target: Ket) -> float:
    return fidelity_pure(result.rho, target)
