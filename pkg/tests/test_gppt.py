import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.core.operations import overlap
from src.gppt.models import DelaySetting, JointProbTable
from src.gppt.two_time import (
    curve_visibility,
    global_state_T,
    joint_prob_closed,
    joint_prob_double_integral,
    joint_prob_quadrature,
    joint_prob_table,
    one_time_conditional,
    periodic_average,
    project_initial_time,
    projected_initial_state,
    sin_cos_product_average,
    theory_curve,
    time_averaged_state,
    two_time_conditional,
)
from src.paw.mechanism import DETECTOR_PAIRS, constraint_residual, observer_conditionals, total_hamiltonian
from src.paw.models import ClockParams, PawState
from src.utils.errors import DetectorIndexError

TAU_GRID = np.linspace(0.0, math.pi, 50)


def test_projected_initial_state(singlet_ket):
    """The H path of PBS₁ leaves |HV⟩, which is not static"""
    hv = projected_initial_state()

    assert hv.amplitudes[1] == 1
    assert constraint_residual(PawState(psi=hv)) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert abs(overlap(hv, singlet_ket)) == pytest.approx(1 / math.sqrt(2), abs=1e-12)


def test_project_initial_time_from_singlet(singlet_ket):
    """Projecting the singlet's clock onto H gives |HV⟩ with probability 1/2"""
    outcome = project_initial_time(singlet_ket)
    assert outcome.probability == pytest.approx(0.5, abs=1e-12)
    np.testing.assert_allclose(outcome.ket.amplitudes, [0, 1, 0, 0], atol=1e-12)

    v_branch = project_initial_time(singlet_ket, keep="V")
    np.testing.assert_allclose(v_branch.ket.amplitudes, [0, 0, -1, 0], atol=1e-12)


def test_global_state_T_examples():
    """|Ψ(T)⟩ at the three reference points"""
    np.testing.assert_allclose(global_state_T(0.0, 0.0).amplitudes, [0, 1, 0, 0], atol=1e-12)
    np.testing.assert_allclose(global_state_T(math.pi / 2, 0.0).amplitudes, [0, 0, -1, 0], atol=1e-12)
    np.testing.assert_allclose(global_state_T(0.0, math.pi / 2).amplitudes, [0, 0, 0, -1], atol=1e-12)


def test_joint_prob_quadrature_reference_values():
    """P31=3/8, P32=1/8, P41=1/8 at ωτ=0"""
    assert joint_prob_quadrature(3, 1, 0.0) == pytest.approx(3 / 8, abs=1e-9)
    assert joint_prob_quadrature(3, 2, 0.0) == pytest.approx(1 / 8, abs=1e-9)
    assert joint_prob_quadrature(4, 1, 0.0) == pytest.approx(1 / 8, abs=1e-9)


def test_joint_prob_closed_reference_values():
    """Closed forms at their reference delays"""
    assert joint_prob_closed(3, 1, 0.0) == pytest.approx(3 / 8)
    assert joint_prob_closed(3, 2, math.pi / 2) == pytest.approx(3 / 8)
    tau = math.pi / 7
    assert joint_prob_closed(3, 1, tau) + joint_prob_closed(4, 1, tau) == pytest.approx(0.5)


def test_quadrature_matches_closed_forms():
    """All detector pairs agree within 1e-9 on a 50-point delay grid"""
    for tau in TAU_GRID:
        for j, k in DETECTOR_PAIRS:
            assert abs(joint_prob_quadrature(j, k, tau) - joint_prob_closed(j, k, tau)) < 1e-9


def test_quadrature_with_nontrivial_omega():
    """Observables depend only on ωτ"""
    omega, tau = 2.5, 0.37
    assert joint_prob_quadrature(3, 1, tau, omega=omega) == pytest.approx(
        joint_prob_closed(3, 1, omega * tau, omega=1.0), abs=1e-9
    )


def test_joint_prob_table_identities():
    """Normalization and unbiased clock marginals for every delay"""
    for tau in TAU_GRID:
        table = joint_prob_table(tau)
        total = sum(table.get(j, k) for j, k in DETECTOR_PAIRS)
        assert total == pytest.approx(1.0, abs=1e-9)
        assert table.P31 + table.P41 == pytest.approx(0.5, abs=1e-9)
        assert table.P32 + table.P42 == pytest.approx(0.5, abs=1e-9)


def test_joint_prob_table_validation():
    """Tables violating the marginals are rejected"""
    with pytest.raises(ValidationError):
        JointProbTable(P31=0.5, P32=0.1, P41=0.1, P42=0.3)


def test_sin_cos_product_average_audit():
    """(1/2π)∫sin²(φ+a)cos²φ dφ equals (1 + 2sin²a)/8, not the cos² form"""
    for a in np.linspace(0.0, 2 * math.pi, 50):
        assert abs(sin_cos_product_average(a) - (1 + 2 * math.sin(a) ** 2) / 8) < 1e-9

    a = 0.3
    assert abs(sin_cos_product_average(a) - (1 + 2 * math.cos(a) ** 2) / 8) > 1e-3


def test_time_averaged_state_properties():
    """Unit trace, ⟨HV|ρ̄|HV⟩ = 3/8 at τ=0, and [ρ̄, ℋ] = 0"""
    rho_bar = time_averaged_state(0.0)
    H = total_hamiltonian(1.0).matrix

    assert np.trace(rho_bar.matrix).real == pytest.approx(1.0, abs=1e-12)
    assert rho_bar.element("HV", "HV").real == pytest.approx(3 / 8, abs=1e-9)
    assert np.linalg.norm(rho_bar.matrix @ H - H @ rho_bar.matrix) < 1e-9

    rest = rho_bar.matrix.reshape(2, 2, 2, 2)
    reduced = np.einsum("ijil->jl", rest)
    np.testing.assert_allclose(reduced, np.eye(2) / 2, atol=1e-9)


def test_time_averaged_state_monte_carlo():
    """Random plate phases approach the quadrature average"""
    quadrature = time_averaged_state(0.4)
    sampled = time_averaged_state(0.4, mode="monte_carlo", n_samples=200_000, seed=7)

    assert np.max(np.abs(sampled.matrix - quadrature.matrix)) < 0.01


def test_two_time_conditional_reference_values():
    """p(3|t1)=3/4 and p(3|t2)=1/4 at ωτ=0; p(3|t1)=1/2 at ωτ=π/4"""
    assert two_time_conditional(1, 0.0) == pytest.approx(0.75, abs=1e-9)
    assert two_time_conditional(2, 0.0) == pytest.approx(0.25, abs=1e-9)
    assert two_time_conditional(1, math.pi / 4, method="closed") == pytest.approx(0.5)
    assert two_time_conditional(1, math.pi / 4) == pytest.approx(0.5, abs=1e-9)


def test_two_time_conditional_routes_agree():
    """The ρ̄ route equals the direct quadrature route; branches sum to one"""
    for tau in TAU_GRID[::5]:
        direct = two_time_conditional(1, tau)
        via_density = two_time_conditional(1, tau, method="density")
        assert abs(direct - via_density) < 1e-9
        assert two_time_conditional(1, tau, method="closed") + two_time_conditional(2, tau, method="closed") == pytest.approx(1.0)


def test_two_time_conditional_invalid_detector():
    """Final clock outcome must be 1 or 2"""
    with pytest.raises(DetectorIndexError):
        two_time_conditional(3, 0.0)
    with pytest.raises(DetectorIndexError):
        joint_prob_quadrature(5, 1, 0.0)


def test_double_integral_matches_single_average():
    """Both time integrals reduce to the single average for the static singlet"""
    for tau in (0.0, 0.5, 1.2):
        for j, k in DETECTOR_PAIRS:
            assert joint_prob_double_integral(j, k, tau) == pytest.approx(joint_prob_closed(j, k, tau), abs=1e-9)


def test_one_time_conditional_matches_observer_mode(singlet):
    """Averaging a single clock reading over T reproduces the observer's P(j|k)"""
    table = observer_conditionals(singlet, 0.0)
    for j, k in DETECTOR_PAIRS:
        assert one_time_conditional(singlet, j, k) == pytest.approx(table.get(j, k), abs=1e-9)


def test_theory_curve_extremes_and_visibility():
    """Dense sweep spans 1/4..3/4 on one sinusoid; visibility 1/2"""
    points = theory_curve(np.linspace(0.0, math.pi, 100))
    values = [p.p for p in points]

    assert max(values) == pytest.approx(0.75)
    assert min(values) == pytest.approx(0.25)
    assert curve_visibility(points) == pytest.approx(0.5)
    for point in points:
        assert point.p == pytest.approx(0.5 + math.cos(2 * point.t) / 4, abs=1e-12)


def test_theory_curve_branch_times():
    """Branch 2 points are displaced by π/2ω from branch 1"""
    clock = ClockParams(omega=2.0, t1=0.1)
    points = theory_curve([0.2], clock)

    assert [p.branch for p in points] == [1, 2]
    assert points[0].t == pytest.approx(0.3)
    assert points[1].t == pytest.approx(0.3 + math.pi / 4)


def test_delay_setting_periodicity():
    """Observables repeat with period π/ω in τ"""
    delay = DelaySetting.from_delta(4.0, omega=2.0)
    assert delay.tau == pytest.approx(2.0)
    assert delay.delta_B == pytest.approx(4.0)

    canonical = delay.canonical()
    assert 0 <= canonical.tau < math.pi / 2
    assert two_time_conditional(1, canonical.tau, omega=2.0) == pytest.approx(
        two_time_conditional(1, delay.tau, omega=2.0), abs=1e-9
    )


def test_joint_table_conditional():
    """p(3|t_k) from the joint table equals the two-time conditional"""
    table = joint_prob_table(0.0, method="closed")

    assert table.conditional(1) == pytest.approx(0.75)
    assert table.conditional(2) == pytest.approx(0.25)
    for tau in TAU_GRID[::7]:
        assert two_time_conditional(2, tau) == joint_prob_table(tau).conditional(2)


def test_periodic_average_sums_pairwise():
    """2^20 copies of 0.1 average back to exactly 0.1, column by column"""
    assert periodic_average(np.full(2**20, 0.1)) == 0.1
    np.testing.assert_array_equal(periodic_average(np.full((2**16, 3), 0.1)), [0.1, 0.1, 0.1])

    odd = np.arange(7.0)
    assert periodic_average(odd) == 3.0
