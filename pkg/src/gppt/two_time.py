"""Two-time conditional probabilities with the coordinate time averaged away.

After the initial-time measurement (clock on the H path of PBS₁) the global state
is |H⟩c|V⟩r. Both photons then rotate through plates of unknown thickness ωT and
the clock picks up a known extra delay δ_B = ωτ. Observables are averaged over
φ = ωT ∈ [0, 2π) with the periodic trapezoid rule, which is exact for the
low-degree trigonometric polynomials that appear here.
"""

import math
from typing import Iterable, List, Literal, Optional, Tuple

import numpy as np

from src.core.operations import ProjectionOutcome, basis_ket, project_and_renorm
from src.core.states import DensityMatrix, Ket, Operator
from src.gppt.models import CurvePoint, JointProbTable
from src.paw.mechanism import (
    DETECTOR_PAIRS,
    UNDEFINED_BELOW,
    detector_index,
    global_unitary,
    joint_detector_probabilities,
)
from src.paw.models import ClockParams, PawState
from src.utils.config import settings
from src.utils.errors import DetectorIndexError
from src.utils.logger import setup_logger
from src.utils.rng import stream

logger = setup_logger(__name__)

MIN_NODES = 64

AveragingMode = Literal["quadrature", "monte_carlo"]
ConditionalMethod = Literal["quadrature", "closed", "density"]


def _omega(omega: Optional[float]) -> float:
    return settings.default_omega if omega is None else omega


def _nodes(n_nodes: Optional[int]) -> np.ndarray:
    n_nodes = settings.quadrature_nodes if n_nodes is None else n_nodes
    if n_nodes < MIN_NODES:
        raise ValueError(f"quadrature needs at least {MIN_NODES} nodes, got {n_nodes}")
    return 2.0 * np.pi * np.arange(n_nodes) / n_nodes


def periodic_average(values: np.ndarray) -> np.ndarray:
    """(1/2π)∫₀^{2π} f dφ from samples on equispaced nodes, along axis 0.

    On a periodic grid the trapezoid rule is the node mean. Nodes are summed
    pairwise in node order, so the result does not depend on how the caller
    stacked the other axes.
    """

    values = np.asarray(values)
    n = values.shape[0]
    total = values
    while total.shape[0] > 1:
        half = total.shape[0] // 2
        paired = total[:half] + total[half : 2 * half]
        total = np.concatenate([paired, total[2 * half :]], axis=0)
    return total[0] / n


def _check_detectors(j: int, k: int) -> None:
    if (j, k) not in DETECTOR_PAIRS:
        raise DetectorIndexError(f"invalid detector pair j={j}, k={k}")


# ------------------------------------------------------------------
# States
# ------------------------------------------------------------------


def project_initial_time(psi: Ket, keep: Literal["H", "V"] = "H") -> ProjectionOutcome:
    """Initial-time measurement at PBS₁: keep the clock photon's H (or V) path."""

    clock_projector = np.diag([1.0, 0.0] if keep == "H" else [0.0, 1.0])
    projector = Operator(matrix=np.kron(clock_projector, np.eye(2)), projector=True)
    return project_and_renorm(projector, psi)


def projected_initial_state() -> Ket:
    """|H⟩c|V⟩r: the singlet after the clock photon took the H path of PBS₁."""

    return basis_ket("HV")


def _evolved_amplitudes(phi: np.ndarray, delta_B: float, initial: Optional[Ket] = None) -> np.ndarray:
    initial = initial or projected_initial_state()
    return global_unitary(1.0, phi, delta_B) @ initial.amplitudes


def global_state_T(T: float, tau: float, omega: Optional[float] = None, initial: Optional[Ket] = None) -> Ket:
    """[cos ω(T+τ)|H⟩ − sin ω(T+τ)|V⟩]c [cos ωT|V⟩ + sin ωT|H⟩]r for the default initial state."""

    omega = _omega(omega)
    return Ket(amplitudes=_evolved_amplitudes(np.asarray(omega * T), omega * tau, initial))


# ------------------------------------------------------------------
# Joint probabilities
# ------------------------------------------------------------------


def joint_prob_quadrature(
    j: int,
    k: int,
    tau: float,
    n_nodes: Optional[int] = None,
    omega: Optional[float] = None,
) -> float:
    """Coordinate-time average of |⟨k, j|Ψ(T, τ)⟩|² by the trapezoid rule."""

    _check_detectors(j, k)
    omega = _omega(omega)
    amplitudes = _evolved_amplitudes(_nodes(n_nodes), omega * tau)
    probabilities = joint_detector_probabilities(amplitudes)[:, detector_index(j, k)]
    return float(periodic_average(probabilities))


def joint_prob_closed(j: int, k: int, tau: float, omega: Optional[float] = None) -> float:
    """Closed forms of the averaged joint probabilities.

    P31 = P42 = (1 + 2cos²ωτ)/8 and P32 = P41 = (1 + 2sin²ωτ)/8. The P32
    integrand is sin²(φ+ωτ)cos²φ, whose average carries sin²ωτ; the cos²ωτ
    form belongs to the P31/P42 integrands.
    """

    _check_detectors(j, k)
    a = _omega(omega) * tau
    if (j, k) in ((3, 1), (4, 2)):
        return (1.0 + 2.0 * math.cos(a) ** 2) / 8.0
    return (1.0 + 2.0 * math.sin(a) ** 2) / 8.0


def joint_prob_table(
    tau: float,
    method: Literal["quadrature", "closed"] = "quadrature",
    n_nodes: Optional[int] = None,
    omega: Optional[float] = None,
) -> JointProbTable:
    if method == "quadrature":
        values = {f"P{j}{k}": joint_prob_quadrature(j, k, tau, n_nodes, omega) for j, k in DETECTOR_PAIRS}
    elif method == "closed":
        values = {f"P{j}{k}": joint_prob_closed(j, k, tau, omega) for j, k in DETECTOR_PAIRS}
    else:
        raise ValueError(f"Unknown joint-probability method: {method}")
    return JointProbTable(**values)


def joint_prob_double_integral(
    j: int,
    k: int,
    tau: float,
    n_nodes: int = MIN_NODES,
    omega: Optional[float] = None,
    state: Optional[Ket] = None,
) -> float:
    """Slow two-integral route: average over both T' (before PBS₁) and T − T'.

    The delay plate acts on the clock after the second evolution. For a static
    global state this collapses to ``joint_prob_quadrature``.
    """

    _check_detectors(j, k)
    omega = _omega(omega)
    psi = (state or _singlet()).amplitudes
    phi = _nodes(n_nodes)
    initial_projector = np.kron(np.diag([1.0, 0.0]), np.eye(2))

    # U_{T'} then P_{d_i,t_i}: shape (n', 4)
    first = initial_projector @ (global_unitary(1.0, phi) @ psi)[..., None]
    first = first[..., 0]
    # D_τ U_{T−T'} for every (T, T') pair: shape (n, n', 4, 4)
    second = global_unitary(1.0, phi[:, None] - phi[None, :], omega * tau)
    final = np.einsum("abij,bj->abi", second, first)

    probabilities = joint_detector_probabilities(final)
    averaged = periodic_average(periodic_average(probabilities))
    return float(averaged[detector_index(j, k)] / averaged.sum())


def _singlet() -> Ket:
    return Ket(amplitudes=np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0))


# ------------------------------------------------------------------
# Time-averaged state and conditionals
# ------------------------------------------------------------------


def time_averaged_state(
    tau: float,
    n_nodes: Optional[int] = None,
    omega: Optional[float] = None,
    mode: AveragingMode = "quadrature",
    n_samples: int = 10_000,
    seed: int = 0,
) -> DensityMatrix:
    """ρ̄ ∝ ∫dT U_T ρ_{t_i,d_i} U_T†, normalized to unit trace.

    ``monte_carlo`` replaces the quadrature by random plate phases, as the
    laboratory does with plates of unknown thickness.
    """

    delta_B = _omega(omega) * tau
    if mode == "quadrature":
        amplitudes = _evolved_amplitudes(_nodes(n_nodes), delta_B)
        projectors = np.einsum("ni,nj->nij", amplitudes, amplitudes.conj())
        averaged = periodic_average(projectors)
    elif mode == "monte_carlo":
        phi = stream(seed).uniform(0.0, 2.0 * np.pi, size=n_samples)
        amplitudes = _evolved_amplitudes(phi, delta_B)
        averaged = np.einsum("ni,nj->ij", amplitudes, amplitudes.conj()) / n_samples
    else:
        raise ValueError(f"Unknown averaging mode: {mode}")

    averaged = (averaged + averaged.conj().T) / 2
    return DensityMatrix(matrix=averaged / np.trace(averaged).real)


def final_time_projectors(k: int) -> Tuple[Operator, Operator]:
    """(P_{d=3, t_f=t_k}, P_{t_f=t_k}) = (|k⟩⟨k|⊗|V⟩⟨V|, |k⟩⟨k|⊗1)."""

    if k not in (1, 2):
        raise DetectorIndexError(f"final clock detector must be 1 or 2, got {k}")
    clock = np.diag([1.0, 0.0] if k == 1 else [0.0, 1.0])
    system_v = np.diag([0.0, 1.0])
    return (
        Operator(matrix=np.kron(clock, system_v), projector=True),
        Operator(matrix=np.kron(clock, np.eye(2)), projector=True),
    )


def two_time_conditional(
    k: int,
    tau: float,
    method: ConditionalMethod = "quadrature",
    n_nodes: Optional[int] = None,
    omega: Optional[float] = None,
) -> float:
    """p(3 | t_f = t_k) given the initial-time post-selection."""

    if k not in (1, 2):
        raise DetectorIndexError(f"final clock detector must be 1 or 2, got {k}")

    if method == "density":
        rho_bar = time_averaged_state(tau, n_nodes, omega)
        joint, marginal = final_time_projectors(k)
        numerator = np.trace(joint.matrix @ rho_bar.matrix).real
        denominator = np.trace(marginal.matrix @ rho_bar.matrix).real
        return float(numerator / denominator)
    return joint_prob_table(tau, method, n_nodes, omega).conditional(k)


def one_time_conditional(state: PawState, j: int, k: int, n_nodes: Optional[int] = None) -> Optional[float]:
    """Single clock reading: ∫dT Tr[P_{j,k}(T)ρ] / ∫dT Tr[P_k(T)ρ]; None when the clock reading is impossible."""

    _check_detectors(j, k)
    amplitudes = global_unitary(1.0, _nodes(n_nodes)) @ state.psi.amplitudes
    averaged = periodic_average(joint_detector_probabilities(amplitudes))
    denominator = averaged[detector_index(3, k)] + averaged[detector_index(4, k)]
    if denominator < UNDEFINED_BELOW:
        return None
    return float(averaged[detector_index(j, k)] / denominator)


def sin_cos_product_average(a: float, n_nodes: Optional[int] = None) -> float:
    """(1/2π)∫₀^{2π} sin²(φ+a) cos²φ dφ; equals (1 + 2sin²a)/8."""

    phi = _nodes(n_nodes)
    return float(periodic_average(np.sin(phi + a) ** 2 * np.cos(phi) ** 2))


# ------------------------------------------------------------------
# Clock-time curve
# ------------------------------------------------------------------


def theory_curve(
    tau_list: Iterable[float],
    clock_params: Optional[ClockParams] = None,
    method: ConditionalMethod = "closed",
) -> List[CurvePoint]:
    """Points (t1+τ, p(3|t1; τ)) and (t2+τ, p(3|t2; τ)) for each delay.

    With t2 − t1 = π/2ω the two branches fall on the single curve
    1/2 + cos(2ω(t − t1))/4.
    """

    clock_params = clock_params or ClockParams()
    points = []
    for tau in tau_list:
        for k in (1, 2):
            p = two_time_conditional(k, tau, method=method, omega=clock_params.omega)
            points.append(CurvePoint(t=clock_params.reading(k) + tau, p=p, branch=k, tau=tau))
    logger.debug("Theory curve with %d points", len(points))
    return points


def curve_visibility(points: List[CurvePoint]) -> float:
    """(max − min)/(max + min) of the curve values."""

    values = [point.p for point in points]
    high, low = max(values), min(values)
    return (high - low) / (high + low)
