import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.optics import monte_carlo
from src.optics.models import CoincidenceTable, ShotConfig
from src.optics.monte_carlo import (
    OUTCOMES,
    estimate_conditionals,
    outcome_distribution,
    outcome_table,
    sample_shots,
)
from src.paw.mechanism import make_singlet
from src.gppt.two_time import two_time_conditional
from src.utils.config import Settings


def test_outcome_distribution_observer_mode(fifteen_plates):
    """Singlet anticorrelation: only (3,1) and (4,2) fire, each half the time"""
    for plate in fifteen_plates:
        dist = outcome_distribution("paw-observer", plate)
        assert dist[(3, 1)] == pytest.approx(0.5, abs=1e-12)
        assert dist[(4, 2)] == pytest.approx(0.5, abs=1e-12)
        assert dist[(3, 2)] == 0.0
        assert dist[(4, 1)] == 0.0
        assert dist["discard"] == 0.0


def test_outcome_distribution_gppt_mode():
    """|HV⟩ at T=0 always fires (3,1); ωT=π/4 spreads evenly"""
    dist = outcome_distribution("gppt", 0.0, 0.0)
    assert dist[(3, 1)] == pytest.approx(1.0)
    assert dist["discard"] == 0.0

    dist = outcome_distribution("gppt", math.pi / 4, 0.0)
    for pair in ((3, 1), (3, 2), (4, 1), (4, 2)):
        assert dist[pair] == pytest.approx(0.25, abs=1e-12)


def test_outcome_distribution_gppt_singlet_input_discards_half():
    """A singlet entering PBS₁ loses its V branch"""
    dist = outcome_distribution("gppt", 0.3, 0.0, state=make_singlet().psi)
    assert dist["discard"] == pytest.approx(0.5, abs=1e-12)
    assert sum(dist.values()) == pytest.approx(1.0, abs=1e-12)


def test_outcome_table_rows_normalized():
    """Every row sums to one"""
    table = outcome_table("gppt", np.linspace(0, 2 * math.pi, 33), 0.7)
    np.testing.assert_allclose(table.sum(axis=1), 1.0, atol=1e-12)
    assert table.shape == (33, len(OUTCOMES))


def test_outcome_distribution_invalid_mode():
    """Unknown modes raise"""
    with pytest.raises(ValueError):
        outcome_distribution("eraser", 0.0)


def test_shot_config_validation():
    """Zero shots and empty plate lists are rejected"""
    with pytest.raises(ValidationError):
        ShotConfig(n_shots=0, seed=1, mode="gppt", plate_A_list=[0.0])
    with pytest.raises(ValidationError):
        ShotConfig(n_shots=10, seed=1, mode="gppt", plate_A_list=[])

    uniform = ShotConfig(n_shots=10, seed=1, mode="gppt", plate_distribution="uniform")
    assert uniform.plate_A_list == []


def test_single_shot_lands_in_one_cell():
    """n_shots=1 puts exactly one count somewhere"""
    table = sample_shots(ShotConfig(n_shots=1, seed=42, mode="gppt", plate_A_list=[0.4]))
    assert table.n31 + table.n32 + table.n41 + table.n42 + table.discarded == 1


def test_sampling_is_deterministic():
    """Same config gives the same table, whatever the worker count"""
    config = ShotConfig(n_shots=20_000, seed=2024, mode="gppt", plate_A_list=[0.1, 0.9, 2.2])
    serial = sample_shots(config, max_workers=1)
    parallel = sample_shots(config, max_workers=4)

    assert serial == parallel
    assert sample_shots(config) == serial


def test_seeded_counts_are_pinned():
    """Seed 2024 over three plates always yields the same coincidence counts"""
    table = sample_shots(ShotConfig(n_shots=10_000, seed=2024, mode="gppt", plate_A_list=[0.1, 0.9, 2.2]))

    assert (table.n31, table.n32, table.n41, table.n42, table.discarded) == (4129, 1625, 1549, 2697, 0)


def test_sampling_ignores_environment(monkeypatch):
    """RELCLOCK_* variables cannot move shots between random streams"""
    config = ShotConfig(n_shots=10_000, seed=2024, mode="gppt", plate_A_list=[0.1, 0.9, 2.2])
    baseline = sample_shots(config)

    monkeypatch.setenv("RELCLOCK_SHOT_BLOCK_SIZE", "1000")
    monkeypatch.setenv("RELCLOCK_MAX_WORKERS", "3")
    monkeypatch.setattr(monte_carlo, "settings", Settings())

    assert sample_shots(config) == baseline
    assert monte_carlo.SHOT_BLOCK_SIZE == 4096


def test_observer_sampling_zero_cells_stay_empty(fifteen_plates):
    """Zero-probability coincidences never occur"""
    config = ShotConfig(n_shots=100_000, seed=5, mode="paw-observer", plate_A_list=fifteen_plates)
    table = sample_shots(config)

    assert table.n32 == 0 and table.n41 == 0 and table.discarded == 0
    estimates = estimate_conditionals(table)
    assert estimates.get(3, 1).p_hat == 1.0


def test_gppt_sampling_matches_theory():
    """Dense plate list at δ_B=0 gives p̂(3|1) within 4σ of 3/4"""
    plates = [2 * math.pi * i / 64 for i in range(64)]
    table = sample_shots(ShotConfig(n_shots=100_000, seed=11, mode="gppt", plate_A_list=plates))
    estimate = estimate_conditionals(table).get(3, 1)

    assert abs(estimate.p_hat - 0.75) < 4 * estimate.stderr


def test_uniform_plate_distribution_matches_theory():
    """Continuous plate draws reproduce p(3|t2) at a nonzero delay"""
    delta_B = 0.6
    config = ShotConfig(n_shots=50_000, seed=3, mode="gppt", delta_B=delta_B, plate_distribution="uniform")
    estimate = estimate_conditionals(sample_shots(config)).get(3, 2)

    assert abs(estimate.p_hat - two_time_conditional(2, delta_B, method="closed")) < 4 * estimate.stderr


def test_estimate_conditionals_arithmetic():
    """75/25 split gives p̂=0.75 with the binomial standard error"""
    table = CoincidenceTable(n31=75, n41=25, n_shots=100, seed=0)
    estimates = estimate_conditionals(table)

    assert estimates.get(3, 1).p_hat == pytest.approx(0.75)
    assert estimates.get(3, 1).stderr == pytest.approx(math.sqrt(0.75 * 0.25 / 100), abs=1e-4)
    assert estimates.get(3, 1).p_hat + estimates.get(4, 1).p_hat == pytest.approx(1.0)
    assert not estimates.get(3, 2).defined
    assert estimates.get(4, 2).stderr is None


def test_coincidence_table_total_check():
    """Counts must add up to n_shots"""
    with pytest.raises(ValidationError):
        CoincidenceTable(n31=5, n_shots=10, seed=0)


@pytest.mark.slow
def test_million_shot_oracle_agreement():
    """10⁶ shots stay within 5σ of the analytic conditionals"""
    delta_B = 1.1
    plates = [2 * math.pi * i / 64 for i in range(64)]
    config = ShotConfig(n_shots=1_000_000, seed=99, mode="gppt", plate_A_list=plates, delta_B=delta_B)
    estimates = estimate_conditionals(sample_shots(config))

    for k in (1, 2):
        expected = two_time_conditional(k, delta_B, method="closed")
        estimate = estimates.get(3, k)
        assert abs(estimate.p_hat - expected) < 5 * estimate.stderr
