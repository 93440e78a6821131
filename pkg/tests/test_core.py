import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.core.operations import (
    apply,
    basis_ket,
    conjugate,
    density_from_ket,
    evolution_unitary,
    fidelity_pure,
    hamiltonian_1q,
    identity,
    partial_trace,
    project_and_renorm,
    rotation_unitary,
    states_equal_up_to_phase,
    tensor,
    waveplate_unitary,
)
from src.core.states import DensityMatrix, Ket, Operator
from src.utils.errors import DimensionMismatchError
from src.utils.rng import derive_seed, stream


def test_tensor_basis_order():
    """Clock letter first: |H⟩⊗|V⟩ is basis index 1"""
    ket = tensor(basis_ket("H"), basis_ket("V"))

    assert ket.dim == 4
    np.testing.assert_allclose(ket.amplitudes, [0, 1, 0, 0])


def test_tensor_identity_and_rotated_clock(hv_ket):
    """1⊗1 is 1₄; rotating the clock by π/2 sends |HV⟩ to −|VV⟩"""
    np.testing.assert_allclose(tensor(identity(2), identity(2)).matrix, np.eye(4))

    op = tensor(rotation_unitary(math.pi / 2), identity(2))
    np.testing.assert_allclose(apply(op, hv_ket).amplitudes, [0, 0, 0, -1], atol=1e-12)


def test_tensor_rejects_ququart_operands(hv_ket):
    """Tensor products are only defined for qubit factors"""
    with pytest.raises(DimensionMismatchError):
        tensor(hv_ket, basis_ket("H"))


def test_tensor_mixed_product_property(random_qubit):
    """(A⊗B)(|a⟩⊗|b⟩) = (A|a⟩)⊗(B|b⟩)"""
    a, b = Ket(amplitudes=random_qubit()), Ket(amplitudes=random_qubit())
    A, B = rotation_unitary(0.3), waveplate_unitary(1.1)

    left = apply(tensor(A, B), tensor(a, b))
    right = tensor(apply(A, a), apply(B, b))
    np.testing.assert_allclose(left.amplitudes, right.amplitudes, atol=1e-12)


def test_rotation_unitary_closed_form():
    """θ=π/2 maps |H⟩ to −|V⟩; θ=π/4 maps |V⟩ to (|H⟩+|V⟩)/√2"""
    np.testing.assert_allclose(rotation_unitary(0.0).matrix, np.eye(2))
    np.testing.assert_allclose(apply(rotation_unitary(math.pi / 2), basis_ket("H")).amplitudes, [0, -1], atol=1e-12)
    np.testing.assert_allclose(
        apply(rotation_unitary(math.pi / 4), basis_ket("V")).amplitudes,
        [1 / math.sqrt(2), 1 / math.sqrt(2)],
        atol=1e-12,
    )


def test_rotation_group_property():
    """U(θ₁)U(θ₂) = U(θ₁+θ₂)"""
    for t1, t2 in [(0.1, 0.2), (1.3, -2.7), (math.pi, 0.5)]:
        product = rotation_unitary(t1).matrix @ rotation_unitary(t2).matrix
        np.testing.assert_allclose(product, rotation_unitary(t1 + t2).matrix, atol=1e-12)


def test_evolution_unitary_matches_hamiltonian():
    """exp(−iℋt) from the eigendecomposition equals the closed form"""
    omega, t = 1.7, 0.9
    H = hamiltonian_1q(omega).matrix
    values, vectors = np.linalg.eigh(H)
    exact = vectors @ np.diag(np.exp(-1j * values * t)) @ vectors.conj().T

    np.testing.assert_allclose(evolution_unitary(omega, t).matrix, exact, atol=1e-12)


def test_waveplate_action_on_v():
    """δ=π/2 sends |V⟩ to i|H⟩; |⟨V|U(π/4)|V⟩|² = 1/2"""
    np.testing.assert_allclose(waveplate_unitary(0.0).matrix, np.eye(2))
    np.testing.assert_allclose(apply(waveplate_unitary(math.pi / 2), basis_ket("V")).amplitudes, [1j, 0], atol=1e-12)
    out = apply(waveplate_unitary(math.pi / 4), basis_ket("V"))
    assert abs(out.amplitude("V")) ** 2 == pytest.approx(0.5, abs=1e-12)


def test_waveplate_in_su2_and_matches_rotation_statistics():
    """Both plate models give the same H/V detection probabilities"""
    for delta in np.linspace(0, 2 * math.pi, 100):
        plate = waveplate_unitary(delta)
        assert abs(plate.determinant() - 1.0) < 1e-12
        rot = rotation_unitary(delta)
        np.testing.assert_allclose(np.abs(plate.matrix) ** 2, np.abs(rot.matrix) ** 2, atol=1e-12)


def test_ket_validation():
    """Normalized kets must have unit norm and finite entries"""
    with pytest.raises(ValidationError):
        Ket(amplitudes=[1.0, 1.0])
    with pytest.raises(ValidationError):
        Ket(amplitudes=[np.nan, 0.0])
    with pytest.raises(ValidationError):
        Ket(amplitudes=[1.0, 0.0, 0.0])

    residue = Ket(amplitudes=[0.5, 0.0], normalized=False)
    assert residue.norm == pytest.approx(0.5)


def test_operator_declared_flags_are_checked():
    """Declared unitary/projector structure is verified"""
    with pytest.raises(ValidationError):
        Operator(matrix=2 * np.eye(2), unitary=True)
    with pytest.raises(ValidationError):
        Operator(matrix=[[1, 1], [0, 0]], projector=True)

    assert Operator(matrix=np.diag([1, 0])).is_projector()


def test_project_and_renorm(singlet_ket, hv_ket):
    """Projection branch and probability, including the null outcome"""
    P_h = Operator(matrix=np.kron(np.diag([1, 0]), np.eye(2)), projector=True)
    outcome = project_and_renorm(P_h, singlet_ket)
    assert outcome.probability == pytest.approx(0.5, abs=1e-12)
    assert states_equal_up_to_phase(outcome.ket, hv_ket)

    full = project_and_renorm(identity(4), singlet_ket)
    assert full.probability == pytest.approx(1.0, abs=1e-12)

    P_v = Operator(matrix=np.kron(np.diag([0, 1]), np.eye(2)), projector=True)
    null = project_and_renorm(P_v, hv_ket)
    assert null.is_null
    assert null.probability == 0.0


def test_projector_probabilities_sum_to_one(random_qubit):
    """A complete projector set exhausts the state"""
    psi = tensor(Ket(amplitudes=random_qubit()), Ket(amplitudes=random_qubit()))
    total = 0.0
    for label in ("HH", "HV", "VH", "VV"):
        v = basis_ket(label).amplitudes
        total += project_and_renorm(Operator(matrix=np.outer(v, v.conj())), psi).probability

    assert total == pytest.approx(1.0, abs=1e-12)


def test_fidelity_pure_examples(singlet_ket, hv_ket):
    """F for pure, maximally mixed and |HV⟩ states against the singlet"""
    assert fidelity_pure(density_from_ket(singlet_ket), singlet_ket) == pytest.approx(1.0, abs=1e-12)
    assert fidelity_pure(DensityMatrix.maximally_mixed(), singlet_ket) == pytest.approx(0.25, abs=1e-12)
    assert fidelity_pure(density_from_ket(hv_ket), singlet_ket) == pytest.approx(0.5, abs=1e-12)


def test_fidelity_global_phase_invariance(singlet_ket, random_state):
    """Fidelity ignores the target's global phase"""
    rho = DensityMatrix(matrix=random_state())
    shifted = Ket(amplitudes=np.exp(0.7j) * singlet_ket.amplitudes)

    assert fidelity_pure(rho, shifted) == pytest.approx(fidelity_pure(rho, singlet_ket), abs=1e-12)


def test_fidelity_dimension_mismatch(singlet_ket):
    """Qubit state against ququart target raises"""
    with pytest.raises(DimensionMismatchError):
        fidelity_pure(DensityMatrix.maximally_mixed(2), singlet_ket)


def test_partial_trace(singlet_ket, hv_ket):
    """Singlet marginals are maximally mixed; |HV⟩ keeps |H⟩ on the clock"""
    rho = density_from_ket(singlet_ket)
    np.testing.assert_allclose(partial_trace(rho, "clock").matrix, np.eye(2) / 2, atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, "rest").matrix, np.eye(2) / 2, atol=1e-12)
    np.testing.assert_allclose(partial_trace(density_from_ket(hv_ket), "clock").matrix, np.diag([1, 0]), atol=1e-12)
    np.testing.assert_allclose(partial_trace(density_from_ket(hv_ket), "rest").matrix, np.diag([0, 1]), atol=1e-12)


def test_conjugate_preserves_state(hv_ket):
    """UρU† with a local unitary stays a valid state"""
    U = tensor(rotation_unitary(0.4), rotation_unitary(0.4))
    rho = conjugate(U, density_from_ket(hv_ket))

    assert rho.is_physical()
    assert rho.purity() == pytest.approx(1.0, abs=1e-12)


def test_density_matrix_rejects_unphysical():
    """Negative eigenvalues fail validation; unchecked wraps them"""
    bad = np.diag([1.2, -0.2, 0.0, 0.0])
    with pytest.raises(ValidationError):
        DensityMatrix(matrix=bad)

    wrapped = DensityMatrix.unchecked(bad)
    assert not wrapped.is_physical()
    assert wrapped.min_eigenvalue() == pytest.approx(-0.2)


def test_streams_are_keyed_and_reproducible():
    """Same (seed, keys) repeats; different keys diverge"""
    first = stream(7, 0).random(8)

    np.testing.assert_array_equal(first, stream(7, 0).random(8))
    assert not np.allclose(first, stream(7, 1).random(8))
    assert derive_seed(7, 3) == derive_seed(7, 3)
    assert derive_seed(7, 3) != derive_seed(7, 4)
    assert 0 <= derive_seed(7, 3) < 2**64
