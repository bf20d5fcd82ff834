import numpy as np
import pytest

from qadlab.ensembles import qubit_from_bloch
from qadlab.estimators import (BornDistribution, Outcome, born_probabilities,
                               expected_estimator, qad_estimator,
                               sample_outcome, standard_estimator,
                               twirl_projector)
from qadlab.groups import (GroupRep, build_heisenberg_weyl,
                           build_involution_pair, build_matched_cyclic,
                           build_pauli_qubit)
from qadlab.linalg import DensityMatrix
from qadlab.povm import Povm, computational_povm

HAD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
SZ = np.diag([1.0, -1.0]).astype(complex)
KET0 = np.array([1.0, 0.0], dtype=complex)


def test_born_bloch_state():
    rho = qubit_from_bloch((0.3, 0.0, 0.6))
    dist = born_probabilities(rho, computational_povm(2))
    assert dist.probabilities == pytest.approx([0.80, 0.20], abs=1e-12)


def test_born_maximally_mixed_uniform():
    d = 3
    from qadlab.povm import build_group_povm
    rng = np.random.default_rng(1)
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    sic_like = build_group_povm(build_heisenberg_weyl(d), psi)
    dist = born_probabilities(DensityMatrix(np.eye(d) / d), sic_like)
    assert np.allclose(dist.probabilities, 1.0 / d ** 2, atol=1e-12)


def test_born_pure_state():
    rho = DensityMatrix(np.diag([1.0, 0.0]).astype(complex))
    dist = born_probabilities(rho, computational_povm(2))
    assert dist.probabilities == pytest.approx([1.0, 0.0], abs=1e-14)


def test_born_dimension_mismatch():
    with pytest.raises(ValueError):
        born_probabilities(DensityMatrix(np.eye(3) / 3),
                           computational_povm(2))


def test_sample_deterministic_outcome():
    povm = computational_povm(2)
    dist = BornDistribution(np.array([1.0, 0.0]), povm)
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert sample_outcome(dist, rng).index == 0


def test_sample_frequencies():
    povm = computational_povm(2)
    dist = BornDistribution(np.array([0.5, 0.5]), povm)
    rng = np.random.default_rng(42)
    draws = [sample_outcome(dist, rng).index for _ in range(100000)]
    assert np.mean(draws) == pytest.approx(0.5, abs=0.01)


def test_sample_seed_reproducible():
    rho = qubit_from_bloch((0.3, 0.0, 0.6))
    dist = born_probabilities(rho, computational_povm(2))
    a = [sample_outcome(dist, np.random.default_rng(7)).index
         for _ in range(50)]
    b = [sample_outcome(dist, np.random.default_rng(7)).index
         for _ in range(50)]
    # same fresh generator per draw: identical, trivially
    rng1, rng2 = np.random.default_rng(9), np.random.default_rng(9)
    a = [sample_outcome(dist, rng1).index for _ in range(50)]
    b = [sample_outcome(dist, rng2).index for _ in range(50)]
    assert a == b


def test_standard_estimator():
    est = standard_estimator(Outcome(index=0, state=KET0))
    assert np.allclose(est.mat, np.diag([1.0, 0.0]))
    assert abs(np.trace(est.mat).real - 1.0) < 1e-14
    assert np.linalg.matrix_rank(est.mat) == 1


def test_qad_pauli_gives_maximally_mixed():
    est = qad_estimator(build_pauli_qubit(), Outcome(index=0, state=KET0))
    assert np.allclose(est.mat, np.eye(2) / 2, atol=1e-14)


def test_qad_hadamard_pair():
    rep = build_involution_pair(HAD)
    est = qad_estimator(rep, Outcome(index=0, state=KET0))
    assert np.allclose(est.mat, 0.25 * np.array([[3, 1], [1, 1]]), atol=1e-14)
    assert est.eigenvalues() == pytest.approx([0.146, 0.854], abs=1e-3)


@pytest.mark.parametrize("d", [2, 3, 7])
def test_qad_hw_gives_maximally_mixed(d):
    rng = np.random.default_rng(d)
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    psi = psi / np.linalg.norm(psi)
    est = qad_estimator(build_heisenberg_weyl(d),
                        Outcome(index=0, state=psi))
    assert np.linalg.norm(est.mat - np.eye(d) / d) < 1e-10


def test_expected_estimator_hw_schur():
    d = 4
    rng = np.random.default_rng(0)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    w = a @ a.conj().T
    rho = DensityMatrix(w / np.trace(w).real)
    est = expected_estimator(rho, build_heisenberg_weyl(d),
                             computational_povm(d))
    assert np.linalg.norm(est.mat - np.eye(d) / d) < 1e-10


def test_expected_estimator_trivial_group_dephases():
    d = 3
    trivial = GroupRep(name="trivial", dim=d,
                       elements=(np.eye(d, dtype=complex),),
                       labels=("I",), generator_indices=(0,))
    rng = np.random.default_rng(2)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    w = a @ a.conj().T
    rho = DensityMatrix(w / np.trace(w).real)
    est = expected_estimator(rho, trivial, computational_povm(d))
    assert np.allclose(est.mat, np.diag(np.diag(rho.mat)), atol=1e-12)


def test_expected_estimator_matches_empirical_mean():
    rho = qubit_from_bloch((0.3, 0.0, 0.6))
    rep = build_involution_pair(HAD)
    povm = computational_povm(2)
    dist = born_probabilities(rho, povm)
    rng = np.random.default_rng(123)
    counts = rng.multinomial(100000, dist.probabilities)
    empirical = sum(
        (c / 100000) * twirl_projector(rep, povm.outcome_states[m])
        for m, c in enumerate(counts))
    expected = expected_estimator(rho, rep, povm)
    assert np.linalg.norm(empirical - expected.mat) < 2e-2


def test_expected_estimator_rejects_rank2_effects():
    d = 4
    effects = (np.eye(d, dtype=complex) / 2, np.eye(d, dtype=complex) / 2)
    povm = Povm(dim=d, effects=effects, labels=("A", "B"))
    rho = DensityMatrix(np.eye(d) / d)
    with pytest.raises(ValueError, match="rank"):
        expected_estimator(rho, build_heisenberg_weyl(d), povm)


def test_full_rank_property_spanning_orbits():
    rng = np.random.default_rng(8)
    rep_h = build_involution_pair(HAD)
    for _ in range(25):
        psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        psi = psi / np.linalg.norm(psi)
        est = qad_estimator(rep_h, Outcome(index=0, state=psi))
        assert est.eigenvalues()[0] > 1e-10
    for d in (3, 5):
        rep = build_heisenberg_weyl(d)
        for _ in range(10):
            psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            psi = psi / np.linalg.norm(psi)
            est = qad_estimator(rep, Outcome(index=0, state=psi))
            assert est.eigenvalues()[0] > 1e-10


def test_non_spanning_orbit_rank_deficient():
    rep = build_involution_pair(SZ)
    est = qad_estimator(rep, Outcome(index=0, state=KET0))
    assert np.linalg.matrix_rank(est.mat) == 1


def test_qad_output_is_valid_density():
    rng = np.random.default_rng(4)
    rho = qubit_from_bloch((0.1, 0.2, 0.3))
    rep = build_matched_cyclic(rho)
    psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    psi = psi / np.linalg.norm(psi)
    est = qad_estimator(rep, Outcome(index=0, state=psi))
    assert np.linalg.norm(est.mat - est.mat.conj().T) < 1e-12
    assert abs(np.trace(est.mat).real - 1.0) < 1e-12
    assert est.eigenvalues()[0] > -1e-12
