"""Seeded Monte Carlo of coincidence counting at the detectors."""

from .models import CoincidenceTable, ConditionalEstimates, EstimatedConditional, ShotConfig
from .monte_carlo import estimate_conditionals, outcome_distribution, sample_shots

__all__ = [
    'CoincidenceTable',
    'ConditionalEstimates',
    'EstimatedConditional',
    'ShotConfig',
    'estimate_conditionals',
    'outcome_distribution',
    'sample_shots',
]
