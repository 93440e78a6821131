"""Exact state and operator types for one polarization qubit (dim 2) or the
clock⊗rest ququart (dim 4).

Basis order is fixed once: |H⟩,|V⟩ for a qubit and |HH⟩,|HV⟩,|VH⟩,|VV⟩ for the
ququart, clock letter first. Complex entries are numpy complex128 and are frozen
(read-only) after validation.
"""

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

EXACT_TOL = 1e-12
DENSITY_TOL = 1e-10
PSD_TOL = 1e-8

QUBIT_LABELS = ("H", "V")
QUQUART_LABELS = ("HH", "HV", "VH", "VV")


def _frozen_complex(value, ndim: int) -> np.ndarray:
    array = np.array(value, dtype=np.complex128)
    if array.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError("entries must be finite")
    array.setflags(write=False)
    return array


class Ket(BaseModel):
    """Pure state vector; subnormalized residues carry ``normalized=False``."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    amplitudes: np.ndarray
    normalized: bool = True

    @field_validator("amplitudes", mode="before")
    @classmethod
    def validate_amplitudes(cls, v):
        array = _frozen_complex(v, ndim=1)
        if array.shape[0] not in (2, 4):
            raise ValueError(f"dimension must be 2 or 4, got {array.shape[0]}")
        return array

    @model_validator(mode="after")
    def check_norm(self) -> "Ket":
        norm_sq = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if self.normalized and abs(norm_sq - 1.0) > EXACT_TOL:
            raise ValueError(f"normalized ket has squared norm {norm_sq!r}")
        if not self.normalized and norm_sq > 1.0 + EXACT_TOL:
            raise ValueError(f"subnormalized ket has squared norm {norm_sq!r} > 1")
        return self

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, label: str) -> complex:
        labels = QUBIT_LABELS if self.dim == 2 else QUQUART_LABELS
        return complex(self.amplitudes[labels.index(label)])


class Operator(BaseModel):
    """Square complex matrix with optional declared structure.

    Declared flags are verified at construction; the ``is_*`` checks can be
    called on any operator.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray
    unitary: bool = False
    hermitian: bool = False
    projector: bool = False

    @field_validator("matrix", mode="before")
    @classmethod
    def validate_matrix(cls, v):
        array = _frozen_complex(v, ndim=2)
        if array.shape not in ((2, 2), (4, 4)):
            raise ValueError(f"operator must be 2x2 or 4x4, got {array.shape}")
        return array

    @model_validator(mode="after")
    def check_declared_structure(self) -> "Operator":
        if self.unitary and not self.is_unitary():
            raise ValueError("operator declared unitary fails U†U = 1")
        if self.hermitian and not self.is_hermitian():
            raise ValueError("operator declared Hermitian fails A = A†")
        if self.projector and not self.is_projector():
            raise ValueError("operator declared projector fails P² = P, P = P†")
        return self

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def dagger(self) -> np.ndarray:
        return self.matrix.conj().T

    def is_unitary(self, atol: float = EXACT_TOL) -> bool:
        return bool(np.allclose(self.dagger @ self.matrix, np.eye(self.dim), rtol=0.0, atol=atol))

    def is_hermitian(self, atol: float = EXACT_TOL) -> bool:
        return bool(np.allclose(self.matrix, self.dagger, rtol=0.0, atol=atol))

    def is_projector(self, atol: float = EXACT_TOL) -> bool:
        return self.is_hermitian(atol) and bool(
            np.allclose(self.matrix @ self.matrix, self.matrix, rtol=0.0, atol=atol)
        )

    def determinant(self) -> complex:
        return complex(np.linalg.det(self.matrix))


class DensityMatrix(BaseModel):
    """Mixed state: Hermitian, unit trace, positive semidefinite."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def validate_matrix(cls, v):
        array = _frozen_complex(v, ndim=2)
        if array.shape not in ((2, 2), (4, 4)):
            raise ValueError(f"density matrix must be 2x2 or 4x4, got {array.shape}")
        if not np.allclose(array, array.conj().T, rtol=0.0, atol=DENSITY_TOL):
            raise ValueError("density matrix is not Hermitian")
        trace = np.trace(array)
        if abs(trace - 1.0) > DENSITY_TOL:
            raise ValueError(f"density matrix trace {trace!r} != 1")
        min_eig = float(np.linalg.eigvalsh((array + array.conj().T) / 2).min())
        if min_eig < -PSD_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {min_eig!r}")
        return array

    @classmethod
    def unchecked(cls, matrix: np.ndarray) -> "DensityMatrix":
        """Wrap a Hermitian unit-trace estimate that may fail positivity."""

        array = np.array(matrix, dtype=np.complex128)
        array.setflags(write=False)
        return cls.model_construct(matrix=array)

    @classmethod
    def maximally_mixed(cls, dim: int = 4) -> "DensityMatrix":
        return cls(matrix=np.eye(dim) / dim)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)

    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues().min())

    def is_physical(self, atol: float = PSD_TOL) -> bool:
        return self.min_eigenvalue() >= -atol

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def element(self, row: str, col: str) -> complex:
        labels = QUBIT_LABELS if self.dim == 2 else QUQUART_LABELS
        return complex(self.matrix[labels.index(row), labels.index(col)])


StateSide = Literal["clock", "rest"]
