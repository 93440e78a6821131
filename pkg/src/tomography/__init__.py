"""Two-qubit polarization tomography: projection set, simulated counts, reconstruction."""

from .models import ReconstructionResult, TomographyData
from .projections import (
    ProjectionSetting,
    analyzer_ket,
    design_condition_number,
    design_matrix,
    linear_inversion,
    standard_16_settings,
)
from .reconstruction import (
    born_probabilities,
    fidelity_report,
    log_likelihood,
    project_to_physical,
    reconstruct_linear,
    reconstruct_mle,
    simulate_counts,
)

__all__ = [
    'ProjectionSetting',
    'ReconstructionResult',
    'TomographyData',
    'analyzer_ket',
    'born_probabilities',
    'design_condition_number',
    'design_matrix',
    'fidelity_report',
    'linear_inversion',
    'log_likelihood',
    'project_to_physical',
    'reconstruct_linear',
    'reconstruct_mle',
    'simulate_counts',
    'standard_16_settings',
]
