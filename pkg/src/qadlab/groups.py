"""Finite unitary (projective) group representations used as measurement
groups: Heisenberg-Weyl, single-qubit Pauli, cyclic shifts, involution
pairs, the eigenbasis-matched cyclic group, and small symmetric groups.

Also provides the Cayley operator of a representation and the
commutativity residual between a group and a state.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (DensityMatrix, commutator, frobenius, require_unitary)

CLOSURE_TOL = 1e-8


def shift_operator(d: int) -> np.ndarray:
    """Cyclic shift X with X|j> = |j+1 mod d>."""
    x = np.zeros((d, d), dtype=complex)
    for j in range(d):
        x[(j + 1) % d, j] = 1.0
    return x


def clock_operator(d: int) -> np.ndarray:
    """Phase (clock) operator Z = diag(1, w, ..., w^(d-1)), w = exp(2πi/d)."""
    omega = np.exp(2j * np.pi / d)
    return np.diag(omega ** np.arange(d))


def _projective_distance(product: np.ndarray, candidate: np.ndarray) -> float:
    """min over phases φ of ||product - e^{iφ} candidate||_F, computed as a
    direct difference norm to avoid cancellation."""
    tr = np.trace(candidate.conj().T @ product)
    phase = tr / abs(tr) if abs(tr) > 1e-300 else 1.0
    return float(np.linalg.norm(product - phase * candidate))


@dataclass(frozen=True)
class GroupRep:
    """Ordered list of unitaries forming a projective representation.

    Element 0 is the identity; `generator_indices` designate the declared
    generating set.
    """

    name: str
    dim: int
    elements: tuple
    labels: tuple
    generator_indices: tuple
    check_closure: bool = field(default=True, compare=False)

    def __post_init__(self):
        if len(self.elements) != len(self.labels):
            raise ValueError("elements and labels length mismatch")
        for u, lab in zip(self.elements, self.labels):
            require_unitary(u, what=f"group element {lab!r}")
        ident = np.eye(self.dim)
        if frobenius(self.elements[0] - ident) > 1e-10:
            raise ValueError("element 0 must be the identity")
        for k in self.generator_indices:
            if not (0 <= k < len(self.elements)):
                raise ValueError(f"generator index {k} out of range")
        if self.check_closure:
            self._verify_projective_closure()

    def __len__(self) -> int:
        return len(self.elements)

    def _verify_projective_closure(self):
        n = len(self.elements)
        if n <= 16:
            pairs = itertools.product(range(n), range(n))
        else:
            rng = np.random.default_rng(0)
            pairs = zip(rng.integers(0, n, 100), rng.integers(0, n, 100))
        for i, j in pairs:
            prod = self.elements[i] @ self.elements[j]
            # preselect by trace overlap, then measure the aligned distance
            overlaps = [abs(np.trace(w.conj().T @ prod))
                        for w in self.elements]
            best = _projective_distance(
                prod, self.elements[int(np.argmax(overlaps))])
            if best > CLOSURE_TOL:
                raise ValueError(
                    f"group {self.name!r} not projectively closed: product of "
                    f"elements {i},{j} is {best:.3e} from every element")

    def generators(self):
        """Distinct generator unitaries (deduplicated by index)."""
        seen = []
        for k in self.generator_indices:
            if k not in seen:
                seen.append(k)
        return [self.elements[k] for k in seen]


def build_heisenberg_weyl(d: int) -> GroupRep:
    """HW(d): the d^2 operators X^a Z^b, a, b in {0..d-1}.

    Elements are stored as plain X^a Z^b without extra phase conventions;
    all estimator formulas conjugate by the elements, so global phases are
    immaterial.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    x = shift_operator(d)
    z = clock_operator(d)
    xp = [np.linalg.matrix_power(x, a) for a in range(d)]
    zp = [np.linalg.matrix_power(z, b) for b in range(d)]
    elements = []
    labels = []
    for a in range(d):
        for b in range(d):
            elements.append(xp[a] @ zp[b])
            labels.append(f"X^{a} Z^{b}")
    # generators: X = element (a=1, b=0) at index d; Z = (0, 1) at index 1
    return GroupRep(name=f"HW({d})", dim=d, elements=tuple(elements),
                    labels=tuple(labels), generator_indices=(d, 1))


def build_pauli_qubit() -> GroupRep:
    """The single-qubit Pauli group {I, X, Y, Z} (order 4, modulo phases)."""
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return GroupRep(name="Pauli(2)", dim=2,
                    elements=(np.eye(2, dtype=complex), sx, sy, sz),
                    labels=("I", "X", "Y", "Z"),
                    generator_indices=(1, 3))


def build_cyclic_shift(d: int) -> GroupRep:
    """Z_d realized by powers of the cyclic shift X."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    x = shift_operator(d)
    elements = tuple(np.linalg.matrix_power(x, k) for k in range(d))
    labels = tuple(f"X^{k}" for k in range(d))
    return GroupRep(name=f"Z_{d}(shift)", dim=d, elements=elements,
                    labels=labels, generator_indices=(1,))


def build_involution_pair(u, name: str = "involution") -> GroupRep:
    """Two-element group {I, U} for a U with U^2 = e^{iφ} I."""
    u = require_unitary(u, what="involution generator")
    d = u.shape[0]
    if _projective_distance(u @ u, np.eye(d)) > 1e-8:
        raise ValueError("generator is not an involution up to phase")
    return GroupRep(name=name, dim=d,
                    elements=(np.eye(d, dtype=complex), u),
                    labels=("I", "U"), generator_indices=(1,))


def _deterministic_eigenbasis(rho: DensityMatrix) -> np.ndarray:
    """Eigenvectors of rho as columns, ordered by descending eigenvalue.

    Within degenerate clusters (eigenvalue gap <= 1e-10) columns are ordered
    by the index of their largest-magnitude component, and each column's
    phase is fixed so that component is real positive.
    """
    w, v = np.linalg.eigh(rho.mat)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    cols = []
    anchor = []
    for k in range(v.shape[1]):
        col = v[:, k]
        j = int(np.argmax(np.abs(col)))
        phase = col[j] / abs(col[j])
        cols.append(col / phase)
        anchor.append(j)
    # stable reorder inside degenerate clusters by anchor index
    idx = list(range(len(cols)))
    start = 0
    for k in range(1, len(cols) + 1):
        if k == len(cols) or abs(w[k] - w[start]) > 1e-10:
            cluster = sorted(idx[start:k], key=lambda i: anchor[i])
            idx[start:k] = cluster
            start = k
    return np.column_stack([cols[i] for i in idx])


def build_matched_cyclic(rho: DensityMatrix) -> GroupRep:
    """Z_d conjugated into the eigenbasis of rho (oracle benchmark).

    The shift-type generator is used: a phase-type generator would commute
    with rho and yield a non-spanning orbit.
    """
    d = rho.dim
    v = _deterministic_eigenbasis(rho)
    x = shift_operator(d)
    gen = v @ x @ v.conj().T
    elements = tuple(np.linalg.matrix_power(gen, k) for k in range(d))
    labels = tuple(f"(VXV†)^{k}" for k in range(d))
    return GroupRep(name=f"matched-Z_{d}", dim=d, elements=elements,
                    labels=labels, generator_indices=(1,))


def build_symmetric_group(d: int) -> GroupRep:
    """Permutation-matrix representation of S_d, d <= 5 (d! elements)."""
    if not (2 <= d <= 5):
        raise ValueError("symmetric group provided only for 2 <= d <= 5")
    elements = []
    labels = []
    perms = sorted(itertools.permutations(range(d)))
    # put the identity permutation first (it sorts first anyway)
    for p in perms:
        m = np.zeros((d, d), dtype=complex)
        for j, pj in enumerate(p):
            m[pj, j] = 1.0
        elements.append(m)
        labels.append("".join(map(str, p)))
    # generators: a transposition and a d-cycle
    swap = tuple([1, 0] + list(range(2, d)))
    cycle = tuple(list(range(1, d)) + [0])
    gen_idx = (perms.index(swap), perms.index(cycle))
    return GroupRep(name=f"S_{d}", dim=d, elements=tuple(elements),
                    labels=tuple(labels), generator_indices=gen_idx)


def cayley_operator(rep: GroupRep) -> np.ndarray:
    """A_G = sum over distinct generators g of (U_g + U_g†).

    Hermitian by construction; this is the Cayley operator over the
    generator set together with its inverses.
    """
    gens = rep.generators()
    if not gens:
        raise ValueError("group has an empty generator set")
    d = rep.dim
    a = np.zeros((d, d), dtype=complex)
    for u in gens:
        a += u + u.conj().T
    return a


def commutativity_residual(rep: GroupRep, rho: DensityMatrix) -> float:
    """delta_Q = ||[A_G, rho]||_F / ||rho||_F."""
    if rep.dim != rho.dim:
        raise ValueError(f"dimension mismatch: {rep.dim} vs {rho.dim}")
    a = cayley_operator(rep)
    return frobenius(commutator(a, rho.mat)) / frobenius(rho.mat)


def orbit_spans(rep: GroupRep, psi, tol: float = 1e-10) -> bool:
    """True if the orbit {U_g psi} spans C^d (orbit Gram matrix full rank)."""
    vecs = np.column_stack([u @ psi for u in rep.elements])
    s = np.linalg.svd(vecs, compute_uv=False)
    return bool(np.sum(s > tol * s[0]) == rep.dim)
