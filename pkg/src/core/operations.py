"""Pure linear-algebra operations on the qcore types."""

from typing import NamedTuple, Optional, Union

import numpy as np

from src.core.states import (
    EXACT_TOL,
    QUBIT_LABELS,
    QUQUART_LABELS,
    DensityMatrix,
    Ket,
    Operator,
    StateSide,
)
from src.utils.errors import DimensionMismatchError

NULL_PROBABILITY = 1e-14


class ProjectionOutcome(NamedTuple):
    """Result of a projective measurement branch.

    ``ket`` is None when the branch has probability below ``NULL_PROBABILITY``.
    """

    ket: Optional[Ket]
    probability: float

    @property
    def is_null(self) -> bool:
        return self.ket is None


# ------------------------------------------------------------------
# Constructors
# ------------------------------------------------------------------


def basis_ket(label: str) -> Ket:
    """Basis ket from a label such as ``"H"`` or ``"HV"`` (clock letter first)."""

    labels = QUBIT_LABELS if len(label) == 1 else QUQUART_LABELS
    if label not in labels:
        raise ValueError(f"Unknown basis label: {label!r}")
    amplitudes = np.zeros(len(labels), dtype=np.complex128)
    amplitudes[labels.index(label)] = 1.0
    return Ket(amplitudes=amplitudes)


def identity(dim: int) -> Operator:
    return Operator(matrix=np.eye(dim), unitary=True, hermitian=True, projector=True)


def rotation_matrix(theta) -> np.ndarray:
    """Closed-form exp(-iℋt) with θ = ωt; broadcasts over an array of angles.

    Columns: |H⟩ → cosθ|H⟩ − sinθ|V⟩ and |V⟩ → sinθ|H⟩ + cosθ|V⟩.
    """

    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta), np.sin(theta)
    return np.stack([np.stack([c, s], axis=-1), np.stack([-s, c], axis=-1)], axis=-2)


def rotation_unitary(theta: float) -> Operator:
    """Polarization rotation generated by iω(|H⟩⟨V| − |V⟩⟨H|)."""

    if not np.isfinite(theta):
        raise ValueError("rotation angle must be finite")
    return Operator(matrix=rotation_matrix(theta), unitary=True)


def waveplate_matrix(delta) -> np.ndarray:
    """cosδ·1 + i·sinδ·X; broadcasts over an array of optical thicknesses."""

    delta = np.asarray(delta, dtype=float)
    c, s = np.cos(delta), 1j * np.sin(delta)
    return np.stack([np.stack([c, s], axis=-1), np.stack([s, c], axis=-1)], axis=-2)


def waveplate_unitary(delta: float) -> Operator:
    """Birefringent plate of optical thickness δ: |V⟩ → cosδ|V⟩ + i sinδ|H⟩."""

    if not np.isfinite(delta):
        raise ValueError("plate thickness must be finite")
    return Operator(matrix=waveplate_matrix(delta), unitary=True)


def hamiltonian_1q(omega: float) -> Operator:
    """Local Hamiltonian iω(|H⟩⟨V| − |V⟩⟨H|) with ħ = 1."""

    return Operator(matrix=np.array([[0.0, 1j * omega], [-1j * omega, 0.0]]), hermitian=True)


def evolution_unitary(omega: float, t: float) -> Operator:
    """exp(-i ℋ t) for the local Hamiltonian; equal to rotation_unitary(ωt)."""

    return rotation_unitary(omega * t)


# ------------------------------------------------------------------
# Products and actions
# ------------------------------------------------------------------


def tensor(a: Union[Ket, Operator], b: Union[Ket, Operator]) -> Union[Ket, Operator]:
    """Clock factor ``a`` first, rest factor ``b`` second."""

    if a.dim != 2 or b.dim != 2:
        raise DimensionMismatchError(f"tensor expects two qubit operands, got dims {a.dim} and {b.dim}")
    if isinstance(a, Ket) and isinstance(b, Ket):
        return Ket(
            amplitudes=np.kron(a.amplitudes, b.amplitudes),
            normalized=a.normalized and b.normalized,
        )
    if isinstance(a, Operator) and isinstance(b, Operator):
        return Operator(
            matrix=np.kron(a.matrix, b.matrix),
            unitary=a.unitary and b.unitary,
            hermitian=a.hermitian and b.hermitian,
            projector=a.projector and b.projector,
        )
    raise TypeError("tensor operands must both be kets or both be operators")


def apply(op: Operator, psi: Ket) -> Ket:
    if op.dim != psi.dim:
        raise DimensionMismatchError(f"operator dim {op.dim} does not match ket dim {psi.dim}")
    out = op.matrix @ psi.amplitudes
    return Ket(amplitudes=out, normalized=op.unitary and psi.normalized)


def conjugate(op: Operator, rho: DensityMatrix) -> DensityMatrix:
    """ρ → UρU† for a unitary U."""

    if op.dim != rho.dim:
        raise DimensionMismatchError(f"operator dim {op.dim} does not match state dim {rho.dim}")
    return DensityMatrix(matrix=op.matrix @ rho.matrix @ op.dagger)


def density_from_ket(psi: Ket) -> DensityMatrix:
    """|ψ⟩⟨ψ| of a normalized ket."""

    return DensityMatrix(matrix=np.outer(psi.amplitudes, psi.amplitudes.conj()))


def overlap(a: Ket, b: Ket) -> complex:
    """⟨a|b⟩."""

    if a.dim != b.dim:
        raise DimensionMismatchError(f"cannot overlap dims {a.dim} and {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def states_equal_up_to_phase(a: Ket, b: Ket, atol: float = EXACT_TOL) -> bool:
    """True when a and b differ only by a global phase."""

    return abs(abs(overlap(a, b)) - a.norm * b.norm) < atol and abs(a.norm - b.norm) < atol


# ------------------------------------------------------------------
# Measurement
# ------------------------------------------------------------------


def project_and_renorm(P: Operator, psi: Ket) -> ProjectionOutcome:
    """Project ``psi`` with ``P``; returns the renormalized branch and its probability."""

    if P.dim != psi.dim:
        raise DimensionMismatchError(f"projector dim {P.dim} does not match ket dim {psi.dim}")
    if not P.is_projector():
        raise ValueError("project_and_renorm requires an idempotent Hermitian operator")

    branch = P.matrix @ psi.amplitudes
    probability = float(np.vdot(branch, branch).real)
    if probability < NULL_PROBABILITY:
        return ProjectionOutcome(ket=None, probability=0.0)
    return ProjectionOutcome(ket=Ket(amplitudes=branch / np.sqrt(probability)), probability=probability)


def fidelity_pure(rho: DensityMatrix, psi: Ket) -> float:
    """⟨ψ|ρ|ψ⟩ clipped to [0, 1]."""

    if rho.dim != psi.dim:
        raise DimensionMismatchError(f"state dim {rho.dim} does not match target dim {psi.dim}")
    if not psi.normalized:
        raise ValueError("fidelity target must be normalized")

    value = np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes)
    if abs(value.imag) > EXACT_TOL:
        raise ValueError(f"fidelity has imaginary part {value.imag!r}")
    return float(np.clip(value.real, 0.0, 1.0))


def partial_trace(rho: DensityMatrix, keep: StateSide) -> DensityMatrix:
    """Reduced 2×2 state of the clock or the rest."""

    if rho.dim != 4:
        raise DimensionMismatchError("partial_trace expects a ququart state")

    blocks = rho.matrix.reshape(2, 2, 2, 2)  # (clock, rest, clock', rest')
    if keep == "clock":
        reduced = np.einsum("ijkj->ik", blocks)
    elif keep == "rest":
        reduced = np.einsum("ijil->jl", blocks)
    else:
        raise ValueError(f"keep must be 'clock' or 'rest', got {keep!r}")
    return DensityMatrix(matrix=reduced)
