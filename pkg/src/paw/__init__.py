"""Clock-conditioned evolution inside a globally static two-photon state."""

from .models import ClockParams, ConditionalTable, PawState
from .mechanism import (
    constraint_residual,
    erase_clock_path,
    evolve_global,
    make_singlet,
    observer_conditionals,
    prepare_state,
    relational_state,
    superobserver_erased_state,
    superobserver_fidelity_sweep,
    total_hamiltonian,
)

__all__ = [
    'ClockParams',
    'ConditionalTable',
    'PawState',
    'constraint_residual',
    'erase_clock_path',
    'evolve_global',
    'make_singlet',
    'observer_conditionals',
    'prepare_state',
    'relational_state',
    'superobserver_erased_state',
    'superobserver_fidelity_sweep',
    'total_hamiltonian',
]
