"""Scalar quality and structure measures: fidelities, trace distance,
spectral error, numerical rank, and the purity/capacity/entropy bundle.

Entropies are base 2 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix, psd_sqrt, require_hermitian


def _check_dims(rho: DensityMatrix, sigma: DensityMatrix):
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")


def uhlmann_fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Squared convention. Eigenvalues of the inner product matrix that sit
    at the floating-point noise floor are zeroed before the square root:
    sqrt amplifies +1e-17 noise to 3e-9, which would otherwise dominate
    the error budget for rank-deficient arguments.
    """
    _check_dims(rho, sigma)
    r = psd_sqrt(rho.mat)
    inner = r @ sigma.mat @ r
    w = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    w = np.clip(w, 0.0, None)
    w[w < 1e-13 * max(float(w[-1]), 0.0)] = 0.0
    f = float(np.sum(np.sqrt(w)) ** 2)
    return min(f, 1.0)


def linear_fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Tr(rho sigma); the overlap convention some summary tables use."""
    _check_dims(rho, sigma)
    return float(np.trace(rho.mat @ sigma.mat).real)


def qubit_closed_form_fidelity(rho: DensityMatrix,
                               sigma: DensityMatrix) -> float:
    """Independent 2x2 oracle: Tr(rho sigma) + 2 sqrt(det rho det sigma)."""
    _check_dims(rho, sigma)
    if rho.dim != 2:
        raise ValueError("closed form only valid for qubits")
    dets = np.linalg.det(rho.mat).real * np.linalg.det(sigma.mat).real
    return linear_fidelity(rho, sigma) + 2.0 * float(np.sqrt(max(dets, 0.0)))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """(1/2) ||rho - sigma||_1 via eigenvalues of the Hermitian difference."""
    _check_dims(rho, sigma)
    w = np.linalg.eigvalsh(rho.mat - sigma.mat)
    return 0.5 * float(np.sum(np.abs(w)))


@dataclass(frozen=True)
class StateMetrics:
    purity: float
    kappa: float
    von_neumann_entropy: float
    renyi2_entropy: float


def state_metrics(rho: DensityMatrix) -> StateMetrics:
    """Purity, structural capacity kappa = 1 + 1/purity, and base-2
    entropies (von Neumann and Renyi-2), with 0 log 0 := 0."""
    w = rho.eigenvalues()
    w = np.clip(w, 0.0, None)
    purity = float(np.sum(w ** 2))
    kappa = 1.0 + 1.0 / purity
    pos = w[w > 1e-15]
    vn = float(-np.sum(pos * np.log2(pos)))
    renyi2 = float(-np.log2(purity))
    return StateMetrics(purity=purity, kappa=kappa,
                        von_neumann_entropy=max(vn, 0.0),
                        renyi2_entropy=renyi2)


def spectral_error(rho_hat: DensityMatrix, rho: DensityMatrix) -> float:
    """l2 distance between ascending-sorted eigenvalue vectors."""
    _check_dims(rho_hat, rho)
    return float(np.linalg.norm(np.sort(rho_hat.eigenvalues())
                                - np.sort(rho.eigenvalues())))


def numerical_rank(m, tol: float | None = None) -> int:
    """Count of eigenvalues above `tol` (default 1e-10 * max eigenvalue)."""
    w = np.linalg.eigvalsh(require_hermitian(m, what="numerical_rank input"))
    if tol is None:
        tol = 1e-10 * max(float(w[-1]), 0.0)
    return int(np.sum(w > tol))
