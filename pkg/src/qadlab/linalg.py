"""Dense complex matrix backbone: Hermitian spectral routines, PSD square
roots, commutators, and the validated DensityMatrix container.

Everything here is pure and operates on plain numpy arrays; matrices are
small (d <= 64 or so) so dense eigensolvers are always appropriate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Relative Hermiticity tolerance used by the validated containers.
HERMITICITY_TOL = 1e-10
# Looser tolerance accepted on input to spectral routines.
EIG_HERMITICITY_TOL = 1e-8


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-D complex array and reject non-finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {a.ndim}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def hermiticity_defect(m: np.ndarray) -> float:
    return float(np.linalg.norm(m - m.conj().T))


def require_square(m: np.ndarray, what: str = "matrix") -> np.ndarray:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{what} must be square, got shape {m.shape}")
    return m


def require_hermitian(m, tol: float = EIG_HERMITICITY_TOL,
                      what: str = "matrix") -> np.ndarray:
    """Validate Hermiticity within `tol` (relative) and return the
    symmetrized matrix (M + M†)/2. Downstream spectral formulas assume
    exact Hermiticity, so inputs inside tolerance are always symmetrized.
    """
    m = require_square(m, what)
    defect = hermiticity_defect(m)
    if defect > tol * max(1.0, frobenius(m)):
        raise ValueError(
            f"{what} is not Hermitian: defect {defect:.3e} exceeds "
            f"tolerance {tol:.1e} (relative)")
    return 0.5 * (m + m.conj().T)


def hermitian_eig(h, tol: float = EIG_HERMITICITY_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector matrix V with eigenvectors
    as columns) such that H = V diag(w) V†.
    """
    hs = require_hermitian(h, tol, what="eigendecomposition input")
    w, v = np.linalg.eigh(hs)
    return w, v


def psd_sqrt(p) -> np.ndarray:
    """Hermitian PSD square root via spectral calculus.

    Eigenvalues in [-1e-6, 0) are treated as floating point noise and
    clipped to zero; anything below -1e-6 means the input is genuinely
    not PSD and is rejected.
    """
    ps = require_hermitian(p, what="psd_sqrt input")
    w, v = np.linalg.eigh(ps)
    if w[0] < -1e-6:
        raise ValueError(f"matrix is not PSD: min eigenvalue {w[0]:.3e}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def commutator(a, b) -> np.ndarray:
    a = require_square(a, "commutator first argument")
    b = require_square(b, "commutator second argument")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    d = u.shape[0]
    return float(np.linalg.norm(u.conj().T @ u - np.eye(d))) <= tol


def require_unitary(u, tol: float = 1e-10, what: str = "matrix") -> np.ndarray:
    u = require_square(u, what)
    defect = float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))
    if defect > tol:
        raise ValueError(f"{what} is not unitary: ||U†U - I|| = {defect:.3e}")
    return u


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, PSD, unit-trace complex matrix.

    Construct through `from_matrix`, which symmetrizes, clips eigenvalue
    noise and renormalizes; direct construction skips validation and is
    reserved for internal use where the invariants hold by construction.
    """

    mat: np.ndarray

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def from_matrix(cls, m, clip_tol: float = 1e-8) -> "DensityMatrix":
        ms = require_hermitian(m, HERMITICITY_TOL, what="density matrix")
        tr = float(np.trace(ms).real)
        if abs(tr - 1.0) > 1e-8:
            raise ValueError(f"density matrix trace {tr} is not 1")
        ms = ms / tr
        w, v = np.linalg.eigh(ms)
        if w[0] < -clip_tol:
            raise ValueError(
                f"density matrix is not PSD: min eigenvalue {w[0]:.3e}")
        if w[0] < 0.0:
            w = np.clip(w, 0.0, None)
            ms = (v * w) @ v.conj().T
            ms = ms / float(np.trace(ms).real)
        obj = cls(ms)
        return obj

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues."""
        return np.linalg.eigvalsh(self.mat)


def project_to_density(m) -> DensityMatrix:
    """Nearest-in-spirit projection of a Hermitian matrix onto the density
    set: clip all negative eigenvalues to zero and renormalize the trace.
    Used for coarse tomographic estimates that may be far from PSD.
    """
    ms = require_hermitian(m, tol=1e-6, what="projection input")
    w, v = np.linalg.eigh(ms)
    w = np.clip(w, 0.0, None)
    s = float(w.sum())
    if s <= 0.0:
        raise ValueError("matrix projects to zero; cannot normalize")
    w = w / s
    return DensityMatrix((v * w) @ v.conj().T)


def pure_state_density(psi) -> DensityMatrix:
    """Rank-1 projector onto a unit vector."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    n = float(np.linalg.norm(v))
    if abs(n - 1.0) > 1e-8:
        raise ValueError(f"state vector norm {n} is not 1")
    v = v / n
    return DensityMatrix(np.outer(v, v.conj()))
