import math
import os

# Tests never write the rotating log file.
os.environ.setdefault("RELCLOCK_LOG_DIR", "")

import numpy as np
import pytest

from src.core.operations import basis_ket
from src.paw.mechanism import make_singlet
from src.tomography.projections import standard_16_settings


@pytest.fixture
def singlet():
    return make_singlet()


@pytest.fixture
def singlet_ket():
    return make_singlet().psi


@pytest.fixture
def hv_ket():
    return basis_ket("HV")


@pytest.fixture(scope="session")
def tomography_settings():
    return standard_16_settings()


@pytest.fixture
def fifteen_plates():
    return [2.0 * math.pi * i / 15 for i in range(15)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def _random_density_matrix(rng, dim=4):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _random_qubit_ket(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


@pytest.fixture
def random_state(rng):
    """Factory for random full-rank 4x4 states (Ginibre ensemble)."""
    return lambda: _random_density_matrix(rng)


@pytest.fixture
def random_qubit(rng):
    return lambda: _random_qubit_ket(rng)
