"""Two-arm polarization projections built from quarter/half-wave plates and a V analyzer."""

import itertools
import math
from typing import Dict, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from src.core.operations import tensor
from src.core.states import Ket, Operator
from src.utils.errors import SingularDesignError

SINGULAR_CONDITION = 1e12

# (quarter-wave, half-wave) angles selecting each single-arm polarization.
ARM_ANGLES: Dict[str, Tuple[float, float]] = {
    "H": (0.0, math.pi / 4),
    "V": (0.0, 0.0),
    "D": (math.pi / 4, -math.pi / 8),
    "L": (math.pi / 4, math.pi / 4),
}

_PAULI = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
# Orthonormal Hermitian basis of 4x4 matrices under the Hilbert-Schmidt product.
PAULI_PRODUCTS = np.array([np.kron(a, b) / 2.0 for a in _PAULI for b in _PAULI])


def hwp_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(2 * angle), math.sin(2 * angle)
    return np.array([[c, s], [s, -c]], dtype=np.complex128)


def qwp_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array(
        [
            [c * c + 1j * s * s, (1 - 1j) * s * c],
            [(1 - 1j) * s * c, s * s + 1j * c * c],
        ],
        dtype=np.complex128,
    )


def analyzer_ket(qwp: float, hwp: float) -> Ket:
    """Polarization transmitted by QWP(qwp), then HWP(hwp), then the fixed V analyzer."""

    vertical = np.array([0.0, 1.0], dtype=np.complex128)
    selected = (hwp_matrix(hwp) @ qwp_matrix(qwp)).conj().T @ vertical
    return Ket(amplitudes=selected / np.linalg.norm(selected))


class ProjectionSetting(BaseModel):
    """Plate angles on both arms; the clock arm (c) is the first tensor factor."""

    model_config = ConfigDict(frozen=True)

    qwp_c: float
    hwp_c: float
    qwp_r: float
    hwp_r: float
    label: str

    @field_validator("qwp_c", "hwp_c", "qwp_r", "hwp_r")
    @classmethod
    def validate_angle(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("plate angles must be finite")
        return v

    @classmethod
    def from_label(cls, label: str) -> "ProjectionSetting":
        if len(label) != 2 or any(letter not in ARM_ANGLES for letter in label):
            raise ValueError(f"Unknown projection label: {label!r}")
        (qc, hc), (qr, hr) = ARM_ANGLES[label[0]], ARM_ANGLES[label[1]]
        return cls(qwp_c=qc, hwp_c=hc, qwp_r=qr, hwp_r=hr, label=label)

    def ket(self) -> Ket:
        return tensor(analyzer_ket(self.qwp_c, self.hwp_c), analyzer_ket(self.qwp_r, self.hwp_r))

    def projector(self) -> Operator:
        v = self.ket().amplitudes
        return Operator(matrix=np.outer(v, v.conj()), hermitian=True, projector=True)


def standard_16_settings() -> List[ProjectionSetting]:
    """Products of {H, V, D, L} on each arm, clock letter first."""

    return [ProjectionSetting.from_label(a + b) for a, b in itertools.product("HVDL", repeat=2)]


def projector_stack(settings: Sequence[ProjectionSetting]) -> np.ndarray:
    return np.array([s.projector().matrix for s in settings])


def design_matrix(settings: Sequence[ProjectionSetting]) -> np.ndarray:
    """A[n, m] = Tr[Π_n Γ_m] for the Pauli-product basis Γ."""

    stack = projector_stack(settings)
    return np.einsum("nab,mba->nm", stack, PAULI_PRODUCTS).real


def design_condition_number(settings: Sequence[ProjectionSetting]) -> float:
    return float(np.linalg.cond(design_matrix(settings)))


def linear_inversion(frequencies: np.ndarray, settings: Sequence[ProjectionSetting]) -> np.ndarray:
    """Hermitian unit-trace matrix reproducing ``frequencies``; may be unphysical.

    A non-positive trace falls back to the maximally mixed state.
    """

    design = design_matrix(settings)
    if design.shape[0] != design.shape[1]:
        raise SingularDesignError(f"design matrix must be square, got {design.shape}")
    if np.linalg.cond(design) > SINGULAR_CONDITION:
        raise SingularDesignError("projection settings are not informationally complete")

    try:
        coefficients = np.linalg.solve(design, np.asarray(frequencies, dtype=float))
    except np.linalg.LinAlgError as exc:
        raise SingularDesignError(str(exc)) from exc

    matrix = np.einsum("m,mab->ab", coefficients, PAULI_PRODUCTS)
    matrix = (matrix + matrix.conj().T) / 2
    trace = float(np.trace(matrix).real)
    if trace <= 0.0:
        return np.eye(4, dtype=np.complex128) / 4
    return matrix / trace
