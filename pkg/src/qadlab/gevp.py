"""Double-commutator generalized eigenvalue problem for adaptive group
selection, plus the two-stage adaptive tomography pipeline built on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .estimators import born_probabilities, expected_estimator
from .groups import (GroupRep, build_cyclic_shift, cayley_operator,
                     commutativity_residual)
from .linalg import (DensityMatrix, commutator, frobenius, project_to_density,
                     require_hermitian)
from .metrics import trace_distance, uhlmann_fidelity
from .povm import Povm, build_sic_povm, computational_povm, find_sic_fiducial

CYCLIC_ORDER_CAP = 64


@dataclass(frozen=True)
class OperatorBasis:
    """Hermitian candidate generators B_k with their Hilbert-Schmidt Gram
    matrix G_ij = Tr(B_i† B_j)."""

    dim: int
    operators: tuple
    gram: np.ndarray

    def __post_init__(self):
        for k, b in enumerate(self.operators):
            defect = frobenius(b - b.conj().T)
            if defect > 1e-10 * max(1.0, frobenius(b)):
                raise ValueError(f"basis operator {k} not Hermitian")
        w = np.linalg.eigvalsh(0.5 * (self.gram + self.gram.T))
        if w[0] <= 1e-12:
            raise ValueError(f"gram matrix not SPD (min eig {w[0]:.3e})")


@dataclass
class GevpResult:
    """Ascending generalized eigenvalues with G-orthonormal coefficient
    vectors; `generator`/`unitary` are filled by optimal_generator."""

    eigenvalues: np.ndarray
    coefficient_vectors: np.ndarray  # columns
    generator: np.ndarray | None = field(default=None)
    unitary: np.ndarray | None = field(default=None)


def gell_mann_basis(d: int) -> OperatorBasis:
    """The d^2 - 1 generalized Gell-Mann matrices scaled to
    Tr(B_i B_j) = delta_ij (so the Gram matrix is the identity)."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    ops = []
    s = 1.0 / np.sqrt(2.0)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = s
            m[k, j] = s
            ops.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j * s
            m[k, j] = 1j * s
            ops.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -float(l)
        diag = diag / np.linalg.norm(diag)
        ops.append(np.diag(diag).astype(complex))
    return OperatorBasis(dim=d, operators=tuple(ops),
                         gram=np.eye(len(ops)))


def double_commutator_matrix(rho: DensityMatrix,
                             basis: OperatorBasis) -> np.ndarray:
    """M_ij = Tr(B_i† [rho, [rho, B_j]]).

    For Hermitian rho and B this equals the commutator Gram form
    Tr([rho, B_i]† [rho, B_j]), which is real symmetric PSD.
    """
    if rho.dim != basis.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {basis.dim}")
    b = np.stack(basis.operators)
    inner = rho.mat[None, :, :] @ b - b @ rho.mat[None, :, :]
    outer = rho.mat[None, :, :] @ inner - inner @ rho.mat[None, :, :]
    n = b.shape[0]
    m = (b.conj().reshape(n, -1) @ outer.reshape(n, -1).T)
    m = np.real(0.5 * (m + m.T))
    return m


def solve_gevp(m, gram) -> GevpResult:
    """Solve M c = lambda G c for SPD G; eigenvalues ascending, vectors
    G-orthonormal."""
    m = require_hermitian(m, what="GEVP matrix")
    gram = np.asarray(gram, dtype=float)
    w = np.linalg.eigvalsh(0.5 * (gram + gram.T))
    if w[0] <= 1e-12:
        raise ValueError("gram matrix not SPD")
    vals, vecs = scipy.linalg.eigh(m, gram)
    return GevpResult(eigenvalues=vals, coefficient_vectors=vecs)


def optimal_generator(result: GevpResult, basis: OperatorBasis):
    """Build A* from the eigenvector of the smallest eigenvalue, normalize
    to unit Frobenius norm, and exponentiate: U* = exp(i pi A*).

    The smallest eigenvalue is chosen because it measures the commutation
    residual of the corresponding generator direction; degenerate minima
    are broken by the ascending sort's lowest index.
    """
    c = result.coefficient_vectors[:, 0]
    a = sum(ck * bk for ck, bk in zip(c, basis.operators))
    a = 0.5 * (a + a.conj().T)
    a = a / frobenius(a)
    w, v = np.linalg.eigh(a)
    u = (v * np.exp(1j * np.pi * w)) @ v.conj().T
    result.generator = a
    result.unitary = u
    return a, u


def cyclic_rep_from_unitary(u, cap: int = CYCLIC_ORDER_CAP,
                            name: str = "adapted") -> GroupRep:
    """Powers of U up to the first projective return to identity, capped.

    A generic exp(i pi A*) has infinite order, so the capped element list
    is generally not projectively closed; closure checking is skipped and
    the truncation is recorded in the name.
    """
    d = u.shape[0]
    elements = [np.eye(d, dtype=complex)]
    power = np.array(u)
    order = None
    for k in range(1, cap):
        if abs(abs(np.trace(power)) - d) < 1e-8:
            order = k
            break
        elements.append(power)
        power = power @ u
    closed = order is not None
    label = f"{name}(order={order})" if closed else f"{name}(truncated@{cap})"
    return GroupRep(name=label, dim=d, elements=tuple(elements),
                    labels=tuple(f"U^{k}" for k in range(len(elements))),
                    generator_indices=(1,) if len(elements) > 1 else (0,),
                    check_closure=closed)


def sic_linear_inversion(povm: Povm, frequencies: np.ndarray) -> DensityMatrix:
    """rho_hat = sum_m [(d+1) f_m - 1/d] Pi_m with Pi = d E, projected to
    the density set (clip negatives, renormalize)."""
    d = povm.dim
    est = np.zeros((d, d), dtype=complex)
    for fm, e in zip(frequencies, povm.effects):
        est += ((d + 1) * fm - 1.0 / d) * (d * e)
    return project_to_density(est)


def adaptive_pipeline(rho_true: DensityMatrix, n_coarse: int,
                      rng: np.random.Generator,
                      sic: Povm | None = None,
                      sic_restarts: int = 16) -> dict:
    """Two-stage adaptive protocol.

    Stage 1 draws `n_coarse` SIC outcomes and forms a coarse estimate by
    linear inversion. Stage 2 solves the double-commutator GEVP on the
    coarse estimate and exponentiates the optimal generator into a cyclic
    group. Stage 3 reports commutativity residuals and expected-estimator
    fidelities for the adapted group against a fixed cyclic-shift baseline.
    """
    d = rho_true.dim
    if n_coarse < d * d:
        raise ValueError(
            f"n_coarse = {n_coarse} below d^2 = {d * d}: inversion "
            "underdetermined in expectation")
    if sic is None:
        fid = find_sic_fiducial(d, restarts=sic_restarts, seed=0)
        sic = build_sic_povm(d, fid)
    dist = born_probabilities(rho_true, sic)
    counts = rng.multinomial(n_coarse, dist.probabilities)
    freqs = counts / n_coarse
    rho_hat = sic_linear_inversion(sic, freqs)

    basis = gell_mann_basis(d)
    m = double_commutator_matrix(rho_hat, basis)
    result = solve_gevp(m, basis.gram)
    a_star, u_star = optimal_generator(result, basis)

    adapted = cyclic_rep_from_unitary(u_star)
    baseline = build_cyclic_shift(d)
    comp = computational_povm(d)
    fid_adapted = uhlmann_fidelity(
        expected_estimator(rho_true, adapted, comp), rho_true)
    fid_baseline = uhlmann_fidelity(
        expected_estimator(rho_true, baseline, comp), rho_true)

    return {
        "d": d,
        "n_coarse": int(n_coarse),
        "coarse_trace_distance": trace_distance(rho_hat, rho_true),
        "lambda_spectrum": [float(x) for x in result.eigenvalues],
        "delta_q_before": commutativity_residual(baseline, rho_true),
        "delta_q_after": commutativity_residual(adapted, rho_true),
        "generator_commutator_norm": frobenius(
            commutator(rho_true.mat, a_star)),
        "adapted_group": adapted.name,
        "fidelities": {"adapted": fid_adapted, "baseline": fid_baseline},
    }
