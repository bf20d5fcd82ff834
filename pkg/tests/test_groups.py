import numpy as np
import pytest

from qadlab.groups import (GroupRep, build_cyclic_shift, build_heisenberg_weyl,
                           build_involution_pair, build_matched_cyclic,
                           build_pauli_qubit, build_symmetric_group,
                           cayley_operator, commutativity_residual,
                           orbit_spans, shift_operator)
from qadlab.linalg import DensityMatrix, commutator
from qadlab.ensembles import qubit_from_bloch

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)
HAD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def random_unit(d, rng):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def twirl(rep, psi):
    acc = sum(np.outer(u @ psi, (u @ psi).conj()) for u in rep.elements)
    return acc / len(rep)


def test_hw2_is_pauli_up_to_phase():
    rep = build_heisenberg_weyl(2)
    assert len(rep) == 4
    # X^1 Z^1 equals -i sigma_y up to (exactly equal to) the stored product
    xz = rep.elements[3]
    assert np.allclose(xz, -1j * SY) or np.allclose(xz, SX @ SZ)
    assert np.allclose(rep.elements[2], SX)
    assert np.allclose(rep.elements[1], SZ)


def test_hw3_generator_orders():
    x = shift_operator(3)
    rep = build_heisenberg_weyl(3)
    z = rep.elements[1]
    assert np.allclose(np.linalg.matrix_power(x, 3), np.eye(3))
    assert np.allclose(np.linalg.matrix_power(z, 3), np.eye(3))


@pytest.mark.parametrize("d", [2, 3, 5, 8, 13])
def test_hw_twirl_is_maximally_mixed(d):
    rep = build_heisenberg_weyl(d)
    rng = np.random.default_rng(d)
    for _ in range(5):
        psi = random_unit(d, rng)
        assert np.linalg.norm(twirl(rep, psi) - np.eye(d) / d) < 1e-10


def test_pauli_qubit():
    rep = build_pauli_qubit()
    assert len(rep) == 4
    for u in rep.elements:
        assert np.allclose(u @ u, np.eye(2))
    ket0 = np.array([1.0, 0.0], dtype=complex)
    assert np.linalg.norm(twirl(rep, ket0) - np.eye(2) / 2) < 1e-12


def test_cyclic_shift():
    rep = build_cyclic_shift(2)
    assert np.allclose(rep.elements[1], SX)
    rep5 = build_cyclic_shift(5)
    ket0 = np.zeros(5, dtype=complex)
    ket0[0] = 1.0
    assert orbit_spans(rep5, ket0)
    x = rep5.elements[1]
    assert np.allclose(np.linalg.matrix_power(x, 5), np.eye(5))
    with pytest.raises(ValueError):
        build_cyclic_shift(1)


def test_involution_pair_hadamard():
    rep = build_involution_pair(HAD)
    ket0 = np.array([1.0, 0.0], dtype=complex)
    orbit = [u @ ket0 for u in rep.elements]
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    assert np.allclose(orbit[0], ket0)
    assert np.allclose(orbit[1], plus)
    assert orbit_spans(rep, ket0)


def test_involution_pair_sigma_z_non_spanning():
    rep = build_involution_pair(SZ)
    ket0 = np.array([1.0, 0.0], dtype=complex)
    assert not orbit_spans(rep, ket0)


def test_involution_pair_accepts_phase_involution():
    # (sigma_x sigma_z)^2 = -I, an involution up to phase
    assert np.allclose((SX @ SZ) @ (SX @ SZ), -np.eye(2))
    rep = build_involution_pair(SX @ SZ)
    assert len(rep) == 2


def test_involution_pair_rejects_non_involution():
    u = np.diag(np.exp(2j * np.pi * np.array([0, 1, 2]) / 3))
    with pytest.raises(ValueError, match="involution"):
        build_involution_pair(u)


def test_matched_cyclic_identity_state():
    rep = build_matched_cyclic(DensityMatrix(np.eye(3) / 3))
    e0 = np.array([1.0, 0, 0], dtype=complex)
    assert orbit_spans(rep, e0)


def test_matched_cyclic_diagonal_state():
    rho = DensityMatrix(np.diag([0.5, 0.3, 0.2]).astype(complex))
    rep = build_matched_cyclic(rho)
    # eigenbasis is the computational basis already sorted descending,
    # so the elements are the plain shift powers
    x = shift_operator(3)
    for k in range(3):
        assert np.linalg.norm(rep.elements[k]
                              - np.linalg.matrix_power(x, k)) < 1e-10


def test_matched_cyclic_bloch_state():
    rho = qubit_from_bloch((0.3, 0.0, 0.6))
    rep = build_matched_cyclic(rho)
    assert len(rep) == 2
    ket0 = np.array([1.0, 0.0], dtype=complex)
    assert orbit_spans(rep, ket0)


def test_symmetric_group():
    rep = build_symmetric_group(3)
    assert len(rep) == 6
    with pytest.raises(ValueError):
        build_symmetric_group(6)


def test_cayley_operator_cyclic2():
    rep = build_cyclic_shift(2)
    assert np.allclose(cayley_operator(rep), 2 * SX)


def test_cayley_operator_hw2():
    rep = build_heisenberg_weyl(2)
    assert np.allclose(cayley_operator(rep), 2 * (SX + SZ))


def test_cayley_operator_hermitian():
    for rep in (build_heisenberg_weyl(3), build_cyclic_shift(5),
                build_pauli_qubit()):
        a = cayley_operator(rep)
        assert np.linalg.norm(a - a.conj().T) < 1e-12


def test_residual_maximally_mixed_is_zero():
    rho = DensityMatrix(np.eye(4) / 4)
    assert commutativity_residual(build_heisenberg_weyl(4), rho) < 1e-14


def test_residual_diagonal_with_z_group():
    rep = build_involution_pair(SZ)
    rho = DensityMatrix(np.diag([0.7, 0.3]).astype(complex))
    assert commutativity_residual(rep, rho) < 1e-14


def test_residual_bloch_with_z_group_direct_oracle():
    rep = build_involution_pair(SZ)
    rho = qubit_from_bloch((0.3, 0.0, 0.6))
    # direct 2x2 bracket: A = 2 sigma_z
    expected = np.linalg.norm(commutator(2 * SZ, rho.mat)) \
        / np.linalg.norm(rho.mat)
    got = commutativity_residual(rep, rho)
    assert got == pytest.approx(expected, abs=1e-14)
    assert got > 0.1


@pytest.mark.parametrize("d", [2, 3, 5])
def test_residual_zero_for_polynomial_in_cayley(d):
    import scipy.linalg
    rep = build_cyclic_shift(d)
    a = cayley_operator(rep)
    m = scipy.linalg.expm(a)
    rho = DensityMatrix(m / np.trace(m).real)
    assert commutativity_residual(rep, rho) < 1e-12


def test_identity_must_be_first():
    with pytest.raises(ValueError, match="identity"):
        GroupRep(name="bad", dim=2, elements=(SX, np.eye(2, dtype=complex)),
                 labels=("X", "I"), generator_indices=(0,))


def test_closure_rejects_non_group():
    u = np.diag([1.0, np.exp(0.7j)])
    with pytest.raises(ValueError, match="closed"):
        GroupRep(name="bad", dim=2, elements=(np.eye(2, dtype=complex), u),
                 labels=("I", "U"), generator_indices=(1,))


def test_hw_rejects_small_dim():
    with pytest.raises(ValueError):
        build_heisenberg_weyl(1)
