"""Static-universe mechanics: the zero-energy constraint, relational evolution,
observer-mode conditionals and super-observer erasure."""

import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.core.operations import (
    density_from_ket,
    fidelity_pure,
    hamiltonian_1q,
    identity,
    overlap,
    rotation_matrix,
    tensor,
)
from src.core.states import DensityMatrix, Ket, Operator
from src.paw.models import ClockParams, ConditionalTable, PawState
from src.utils.errors import DetectorIndexError
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

UNDEFINED_BELOW = 1e-14

# Detector (j, k) -> ququart basis index. Clock detector 1 ↔ H, 2 ↔ V;
# system detector 3 ↔ V, 4 ↔ H.
DETECTOR_INDEX: Dict[Tuple[int, int], int] = {
    (3, 1): 1,  # HV
    (3, 2): 3,  # VV
    (4, 1): 0,  # HH
    (4, 2): 2,  # VH
}
DETECTOR_PAIRS: Tuple[Tuple[int, int], ...] = ((3, 1), (3, 2), (4, 1), (4, 2))


def detector_index(j: int, k: int) -> int:
    try:
        return DETECTOR_INDEX[(j, k)]
    except KeyError:
        raise DetectorIndexError(f"invalid detector pair j={j}, k={k}") from None


def joint_detector_probabilities(amplitudes: np.ndarray) -> np.ndarray:
    """|amplitude|² per basis index; works on (..., 4) arrays."""

    return np.abs(np.asarray(amplitudes)) ** 2


# ------------------------------------------------------------------
# States and constraint
# ------------------------------------------------------------------


def make_singlet(clock_params: Optional[ClockParams] = None) -> PawState:
    """(|H⟩c|V⟩r − |V⟩c|H⟩r)/√2."""

    amplitudes = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0)
    return PawState(psi=Ket(amplitudes=amplitudes), clock_params=clock_params or ClockParams())


def prepare_state(
    theta: float,
    phi: float,
    swap_rest: bool,
    clock_params: Optional[ClockParams] = None,
) -> PawState:
    """cosθ|HH⟩ + e^{iφ} sinθ|VV⟩, optionally with H↔V on the rest photon."""

    amplitudes = np.array([math.cos(theta), 0.0, 0.0, np.exp(1j * phi) * math.sin(theta)])
    if swap_rest:
        swap = np.kron(np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]]))
        amplitudes = swap @ amplitudes
    return PawState(psi=Ket(amplitudes=amplitudes), clock_params=clock_params or ClockParams())


def preparation_discrepancy() -> Dict[str, float]:
    """Overlap of the two candidate preparation settings with the singlet.

    θ = π/4, φ = 0 followed by the rest-arm half-wave plate gives the triplet
    (overlap 0); φ = π gives the singlet (overlap 1).
    """

    singlet = make_singlet().psi
    return {
        "phi_0": abs(overlap(singlet, prepare_state(math.pi / 4, 0.0, True).psi)) ** 2,
        "phi_pi": abs(overlap(singlet, prepare_state(math.pi / 4, math.pi, True).psi)) ** 2,
    }


def total_hamiltonian(omega: float) -> Operator:
    """ℋ = ℋc⊗1r + 1c⊗ℋr."""

    if omega <= 0:
        raise ValueError("omega must be positive")
    local = hamiltonian_1q(omega)
    one = identity(2)
    return Operator(matrix=tensor(local, one).matrix + tensor(one, local).matrix, hermitian=True)


def constraint_residual(state: PawState) -> float:
    """‖ℋ|Ψ⟩‖; zero exactly when the global state satisfies ℋ|Ψ⟩ = 0."""

    hamiltonian = total_hamiltonian(state.omega)
    return float(np.linalg.norm(hamiltonian.matrix @ state.psi.amplitudes))


# ------------------------------------------------------------------
# Evolution
# ------------------------------------------------------------------


def global_unitary(omega: float, T, delta_clock_extra: float = 0.0) -> np.ndarray:
    """U_rot(ωT + δ_extra) ⊗ U_rot(ωT); broadcasts over an array of T."""

    omega_t = omega * np.asarray(T, dtype=float)
    clock = rotation_matrix(omega_t + delta_clock_extra)
    rest = rotation_matrix(omega_t)
    product = np.einsum("...ab,...cd->...acbd", clock, rest)
    return product.reshape(product.shape[:-4] + (4, 4))


def evolve_global(state: PawState, T: float, delta_clock_extra: float = 0.0) -> Ket:
    """Propagate both photons through plates of thickness ωT (clock gets δ_extra more)."""

    unitary = global_unitary(state.omega, T, delta_clock_extra)
    return Ket(amplitudes=unitary @ state.psi.amplitudes)


def staticity_defect(state: PawState, T: float) -> float:
    """1 − |⟨Ψ|U_T|Ψ⟩|; zero when U_T leaves the state invariant up to phase."""

    return 1.0 - abs(overlap(state.psi, evolve_global(state, T)))


def relational_state(state: PawState, clock_initial: Ket, t: float) -> Ket:
    """⟨φ(t)|Ψ⟩ with |φ(t)⟩ = exp(-iℋc t)|φ(0)⟩, a subnormalized rest-photon ket."""

    if clock_initial.dim != 2 or not clock_initial.normalized:
        raise ValueError("clock_initial must be a normalized qubit ket")

    phi_t = rotation_matrix(state.omega * t) @ clock_initial.amplitudes
    psi = state.psi.amplitudes.reshape(2, 2)  # (clock, rest)
    return Ket(amplitudes=phi_t.conj() @ psi, normalized=False)


def rest_evolution(state: PawState, clock_initial: Ket, t: float) -> Ket:
    """exp(-iℋr t)|ψ(0)⟩ with |ψ(0)⟩ = ⟨φ(0)|Ψ⟩; the right-hand side of the relational identity."""

    psi_0 = relational_state(state, clock_initial, 0.0)
    return Ket(amplitudes=rotation_matrix(state.omega * t) @ psi_0.amplitudes, normalized=False)


# ------------------------------------------------------------------
# Observer mode
# ------------------------------------------------------------------


def _conditional_table(probabilities: np.ndarray) -> ConditionalTable:
    values: Dict[str, Optional[float]] = {}
    clock = {}
    for k in (1, 2):
        p3 = float(probabilities[DETECTOR_INDEX[(3, k)]])
        p4 = float(probabilities[DETECTOR_INDEX[(4, k)]])
        denominator = p3 + p4
        clock[k] = denominator
        if denominator < UNDEFINED_BELOW:
            values[f"p3{k}"] = values[f"p4{k}"] = None
        else:
            values[f"p3{k}"] = p3 / denominator
            values[f"p4{k}"] = p4 / denominator
    return ConditionalTable(**values, clock_1=clock[1], clock_2=clock[2])


def observer_conditionals(state: PawState, T: float) -> ConditionalTable:
    """Conditional detector statistics after plates of coordinate time T."""

    evolved = evolve_global(state, T)
    return _conditional_table(joint_detector_probabilities(evolved.amplitudes))


def observer_clock_view(tables: Sequence[ConditionalTable], clock_params: ClockParams) -> Dict[str, Optional[float]]:
    """p(t1), p(t2) as the internal observer plots them.

    Plate thickness never enters this processing: clock-column probabilities are
    pooled over all tables before conditioning.
    """

    pooled = np.zeros(4)
    for table in tables:
        for (j, k), index in DETECTOR_INDEX.items():
            conditional = table.get(j, k)
            weight = table.clock_1 if k == 1 else table.clock_2
            if conditional is not None:
                pooled[index] += conditional * weight
    view = _conditional_table(pooled / max(len(tables), 1))
    return {"t1": clock_params.t1, "p_t1": view.p31, "t2": clock_params.t2, "p_t2": view.p32}


# ------------------------------------------------------------------
# Super-observer mode
# ------------------------------------------------------------------


def erasure_kraus(chi: float = 0.0) -> np.ndarray:
    """Right-port Kraus operator of PBS₁ + 50/50 recombination, relative path phase χ."""

    clock = np.diag([1.0, np.exp(1j * chi)]) / math.sqrt(2.0)
    return np.kron(clock, np.eye(2))


def erase_clock_path(rho: DensityMatrix, chi: float = 0.0) -> Tuple[DensityMatrix, float]:
    """Post-select the right beam-splitter port; returns the conditional state and its probability."""

    kraus = erasure_kraus(chi)
    unnormalized = kraus @ rho.matrix @ kraus.conj().T
    probability = float(np.trace(unnormalized).real)
    return DensityMatrix(matrix=unnormalized / probability), probability


def superobserver_erased_state(state: PawState, T: float, chi: float = 0.0) -> Tuple[DensityMatrix, float]:
    """State seen by the super-observer after plates T and coherent erasure of the clock reading."""

    evolved = evolve_global(state, T)
    return erase_clock_path(density_from_ket(evolved), chi)


def superobserver_fidelity_sweep(
    state: PawState,
    T_list: Iterable[float],
    target: Optional[Ket] = None,
    chi: float = 0.0,
) -> List[Tuple[float, float]]:
    """(T, ⟨Ψ|ρ_out(T)|Ψ⟩) for every T; the target defaults to the input state."""

    target = target or state.psi
    sweep = []
    for T in T_list:
        rho_out, _ = superobserver_erased_state(state, T, chi)
        sweep.append((float(T), fidelity_pure(rho_out, target)))
    logger.debug("Fidelity sweep over %d coordinate times (chi=%.3g)", len(sweep), chi)
    return sweep
