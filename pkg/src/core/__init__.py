"""Exact two-qubit linear algebra: states, operators, plates, projections."""

from .states import DensityMatrix, Ket, Operator
from .operations import (
    ProjectionOutcome,
    apply,
    basis_ket,
    conjugate,
    density_from_ket,
    fidelity_pure,
    identity,
    overlap,
    partial_trace,
    project_and_renorm,
    rotation_unitary,
    states_equal_up_to_phase,
    tensor,
    waveplate_unitary,
)

__all__ = [
    'DensityMatrix',
    'Ket',
    'Operator',
    'ProjectionOutcome',
    'apply',
    'basis_ket',
    'conjugate',
    'density_from_ket',
    'fidelity_pure',
    'identity',
    'overlap',
    'partial_trace',
    'project_and_renorm',
    'rotation_unitary',
    'states_equal_up_to_phase',
    'tensor',
    'waveplate_unitary',
]
