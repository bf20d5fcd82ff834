"""Random and parameterized density matrix generation: Bloch qubits,
Ginibre ensembles, and purity-targeted mixtures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix


@dataclass(frozen=True)
class EnsembleConfig:
    dim: int
    target_purity: float
    purity_tolerance: float = 0.01

    def __post_init__(self):
        if self.purity_tolerance <= 0.0:
            raise ValueError("purity tolerance must be positive")
        if not (1.0 / self.dim + 1e-9 < self.target_purity <= 1.0):
            raise ValueError(
                f"target purity {self.target_purity} unreachable in "
                f"dimension {self.dim}")


def qubit_from_bloch(r) -> DensityMatrix:
    """rho = (I + r . sigma)/2 for a Bloch vector with ||r|| <= 1."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValueError("Bloch vector must have 3 components")
    if np.linalg.norm(r) > 1.0 + 1e-12:
        raise ValueError(f"Bloch vector norm {np.linalg.norm(r)} exceeds 1")
    rx, ry, rz = r
    mat = 0.5 * np.array([[1.0 + rz, rx - 1j * ry],
                          [rx + 1j * ry, 1.0 - rz]])
    return DensityMatrix.from_matrix(mat)


def ginibre_density(d: int, rank: int, rng: np.random.Generator) -> DensityMatrix:
    """rho = G G† / Tr(G G†) for a d x rank iid complex Gaussian G."""
    if not (1 <= rank <= d):
        raise ValueError(f"rank {rank} out of range 1..{d}")
    g = (rng.standard_normal((d, rank))
         + 1j * rng.standard_normal((d, rank))) / np.sqrt(2.0)
    w = g @ g.conj().T
    return DensityMatrix(w / float(np.trace(w).real))


def _purity(mat: np.ndarray) -> float:
    return float(np.vdot(mat, mat).real)


def ginibre_with_purity(config: EnsembleConfig,
                        rng: np.random.Generator) -> DensityMatrix:
    """Ginibre state mixed with I/d to hit a purity target.

    A full-rank Ginibre draw concentrates near purity 2/d, so for targets
    above that the base draw uses the smallest rank r whose expected purity
    (d + r)/(d r + 1) reaches the target; the mixing weight toward I/d is
    then bisected (purity is monotone along the segment).
    """
    d = config.dim
    target = config.target_purity
    rank = next(r for r in range(1, d + 1)
                if (d + r) / (d * r + 1) >= target or r == d)
    if (d + rank) / (d * rank + 1) < target:
        rank = max(1, rank - 1)
    base = None
    for _ in range(200):
        cand = ginibre_density(d, rank, rng)
        if _purity(cand.mat) >= target:
            base = cand
            break
        if rank > 1:
            rank -= 1
    if base is None:
        raise RuntimeError("could not draw a base state above target purity")

    mixed = np.eye(d) / d
    lo, hi = 0.0, 1.0  # purity(lo) = base purity >= target >= 1/d = purity(hi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _purity((1.0 - mid) * base.mat + mid * mixed) >= target:
            lo = mid
        else:
            hi = mid
    eps = lo
    rho = DensityMatrix((1.0 - eps) * base.mat + eps * mixed)
    achieved = _purity(rho.mat)
    if abs(achieved - target) > config.purity_tolerance:
        raise RuntimeError(
            f"bisection failed: purity {achieved} vs target {target}")
    return rho
