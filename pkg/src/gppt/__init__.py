"""Two-time conditional probabilities averaged over abstract coordinate time."""

from .models import CurvePoint, DelaySetting, JointProbTable
from .two_time import (
    global_state_T,
    joint_prob_closed,
    joint_prob_quadrature,
    projected_initial_state,
    theory_curve,
    time_averaged_state,
    two_time_conditional,
)

__all__ = [
    'CurvePoint',
    'DelaySetting',
    'JointProbTable',
    'global_state_T',
    'joint_prob_closed',
    'joint_prob_quadrature',
    'projected_initial_state',
    'theory_curve',
    'time_averaged_state',
    'two_time_conditional',
]
