"""Group-structured POVMs, SIC-POVM fiducial search and construction,
and MUB construction for prime dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .groups import GroupRep, build_heisenberg_weyl, clock_operator, shift_operator
from .linalg import frobenius

COMPLETENESS_TOL = 1e-8


@dataclass(frozen=True)
class Povm:
    """List of PSD effects summing to identity.

    `outcome_states` carries the rank-1 direction of each effect when it is
    known exactly by construction (group orbits, projective measurements);
    None otherwise. `provenance` records the generating group and seed
    operator for group-covariant POVMs.
    """

    dim: int
    effects: tuple
    labels: tuple
    provenance: dict = field(default_factory=dict, compare=False)
    outcome_states: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.effects) != len(self.labels):
            raise ValueError("effects and labels length mismatch")
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for e, lab in zip(self.effects, self.labels):
            if e.shape != (self.dim, self.dim):
                raise ValueError(f"effect {lab!r} has shape {e.shape}")
            defect = frobenius(e - e.conj().T)
            if defect > 1e-10 * max(1.0, frobenius(e)):
                raise ValueError(f"effect {lab!r} not Hermitian ({defect:.3e})")
            wmin = float(np.linalg.eigvalsh(0.5 * (e + e.conj().T))[0])
            if wmin < -1e-10:
                raise ValueError(f"effect {lab!r} not PSD (min eig {wmin:.3e})")
            total += e
        resid = frobenius(total - np.eye(self.dim))
        if resid > COMPLETENESS_TOL:
            raise ValueError(
                f"POVM incomplete: ||sum(effects) - I||_F = {resid:.3e}")

    def __len__(self) -> int:
        return len(self.effects)


@dataclass(frozen=True)
class FiducialVector:
    """Unit vector seeding a Heisenberg-Weyl covariant POVM.

    `zauner_residual` is max over (a,b) != (0,0) of
    | |<phi|X^a Z^b|phi>|^2 - 1/(d+1) |; it is recorded, never assumed zero.
    """

    dim: int
    amplitudes: np.ndarray
    zauner_residual: float
    converged: bool = True

    def __post_init__(self):
        n = float(np.linalg.norm(self.amplitudes))
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"fiducial norm {n} deviates from 1")


def displacement_operators(d: int) -> np.ndarray:
    """All X^a Z^b with (a,b) != (0,0), stacked as an array (d^2-1, d, d)."""
    x = shift_operator(d)
    z = clock_operator(d)
    xp = [np.linalg.matrix_power(x, a) for a in range(d)]
    zp = [np.linalg.matrix_power(z, b) for b in range(d)]
    ops = [xp[a] @ zp[b] for a in range(d) for b in range(d) if (a, b) != (0, 0)]
    return np.stack(ops)


def zauner_residual(d: int, phi: np.ndarray,
                    ops: np.ndarray | None = None) -> float:
    if ops is None:
        ops = displacement_operators(d)
    v = phi / np.linalg.norm(phi)
    overlaps = np.einsum("i,kij,j->k", v.conj(), ops, v)
    return float(np.max(np.abs(np.abs(overlaps) ** 2 - 1.0 / (d + 1))))


def frame_potential(d: int, phi: np.ndarray,
                    ops: np.ndarray | None = None) -> float:
    """Sum over (a,b) != (0,0) of |<phi|X^a Z^b|phi>|^4 for unit phi.

    Known achievable minimum is (d-1)/(d+1).
    """
    if ops is None:
        ops = displacement_operators(d)
    v = phi / np.linalg.norm(phi)
    overlaps = np.einsum("i,kij,j->k", v.conj(), ops, v)
    return float(np.sum(np.abs(overlaps) ** 4))


def _potential_and_grad(x: np.ndarray, d: int, ops: np.ndarray):
    """Frame potential of the normalized vector z = x[:d] + i x[d:] and its
    gradient with respect to the real parameterization.
    """
    z = x[:d] + 1j * x[d:]
    n = float(np.real(z.conj() @ z))
    s = np.einsum("i,kij,j->k", z.conj(), ops, z)
    a2 = np.abs(s) ** 2
    fnum = float(np.sum(a2 ** 2))
    f = fnum / n ** 4
    # Wirtinger gradient of fnum: sum_k 2 a2_k (conj(s_k) D_k z + s_k D_k† z)
    gz = 2.0 * np.einsum("k,kij,j->i", a2 * s.conj(), ops, z)
    gz += 2.0 * np.einsum("k,kli,l->i", a2 * s, ops.conj(), z)
    gz = gz / n ** 4 - (4.0 * fnum / n ** 5) * z
    return f, np.concatenate([2.0 * gz.real, 2.0 * gz.imag])


def find_sic_fiducial(d: int, restarts: int = 64, max_iter: int = 5000,
                      tol: float = 1e-6, seed: int = 0) -> FiducialVector:
    """Search for a SIC fiducial by frame-potential minimization.

    Random restarts on the unit sphere with an L-BFGS inner loop and
    analytic gradients. Restarts stop early once the Zauner residual of the
    best candidate is at or below `tol` and the objective is within 1e-10 of
    the achievable minimum. On exhaustion the best-found vector is returned
    with `converged=False`.
    """
    if not (2 <= d <= 13):
        raise ValueError(f"dimension {d} outside supported range 2..13")
    ops = displacement_operators(d)
    target = (d - 1) / (d + 1)
    rng = np.random.default_rng(seed)
    best = None
    best_f = np.inf
    for _ in range(restarts):
        x0 = rng.standard_normal(2 * d)
        res = minimize(_potential_and_grad, x0, args=(d, ops), jac=True,
                       method="L-BFGS-B",
                       options={"maxiter": max_iter, "ftol": 1e-16,
                                "gtol": 1e-14})
        if res.fun < best_f:
            best_f = res.fun
            best = res.x
        if best_f - target <= 1e-10:
            if zauner_residual(d, best[:d] + 1j * best[d:], ops) <= tol:
                break
    # polish the best candidate from a fresh L-BFGS start
    res = minimize(_potential_and_grad, best, args=(d, ops), jac=True,
                   method="L-BFGS-B",
                   options={"maxiter": max_iter, "ftol": 1e-18,
                            "gtol": 1e-15})
    if res.fun < best_f:
        best, best_f = res.x, res.fun
    z = best[:d] + 1j * best[d:]
    z = z / np.linalg.norm(z)
    # fix global phase: largest-magnitude component real positive
    j = int(np.argmax(np.abs(z)))
    z = z / (z[j] / abs(z[j]))
    z = z / np.linalg.norm(z)
    resid = zauner_residual(d, z, ops)
    return FiducialVector(dim=d, amplitudes=z, zauner_residual=resid,
                          converged=resid <= tol)


def build_group_povm(rep: GroupRep, seed_state) -> Povm:
    """E_g = (d/|G|) U_g |s><s| U_g†, with completeness verified.

    The weight d/|G| makes completeness hold exactly when the orbit twirls
    the seed projector to I/d; orbits that do not (e.g. {I, sigma_z} on |0>)
    are rejected with the residual norm reported.
    """
    s = np.asarray(seed_state, dtype=complex).reshape(-1)
    if s.shape[0] != rep.dim:
        raise ValueError(f"seed dimension {s.shape[0]} != group dim {rep.dim}")
    s = s / np.linalg.norm(s)
    d = rep.dim
    n = len(rep)
    states = [u @ s for u in rep.elements]
    effects = [(d / n) * np.outer(v, v.conj()) for v in states]
    resid = frobenius(sum(effects) - np.eye(d))
    if resid > 1e-6:
        raise ValueError(
            f"orbit of seed under {rep.name!r} is not complete: "
            f"||sum(E) - I||_F = {resid:.3e}")
    return Povm(dim=d, effects=tuple(effects), labels=tuple(rep.labels),
                provenance={"group": rep.name, "seed": "unit vector orbit"},
                outcome_states=tuple(states))


def build_sic_povm(d: int, fiducial: FiducialVector) -> Povm:
    """The d^2 effects (1/d) X^a Z^b |phi><phi| Z^-b X^-a."""
    if fiducial.dim != d:
        raise ValueError("fiducial dimension mismatch")
    if fiducial.zauner_residual > 1e-6:
        raise ValueError(
            f"fiducial residual {fiducial.zauner_residual:.3e} too large")
    rep = build_heisenberg_weyl(d)
    povm = build_group_povm(rep, fiducial.amplitudes)
    prov = dict(povm.provenance)
    prov.update({"kind": "SIC", "zauner_residual": fiducial.zauner_residual})
    return Povm(dim=d, effects=povm.effects, labels=povm.labels,
                provenance=prov, outcome_states=povm.outcome_states)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n ** 0.5) + 1))


def build_mub(d: int) -> list:
    """Complete set of d+1 mutually unbiased bases for prime d in 2..13.

    Basis 0 is computational. For odd primes, basis m vector j has
    components omega^(m k^2 + j k)/sqrt(d); for d = 2 the sigma_x and
    sigma_y eigenbases. Unbiasedness is verified post hoc, which is the
    actual contract.
    """
    if not _is_prime(d):
        raise ValueError(f"dimension {d} is not prime")
    if not (2 <= d <= 13):
        raise ValueError(f"dimension {d} outside supported range 2..13")
    bases = [np.eye(d, dtype=complex)]
    if d == 2:
        s = 1.0 / np.sqrt(2.0)
        bases.append(np.array([[s, s], [s, -s]], dtype=complex))
        bases.append(np.array([[s, s], [1j * s, -1j * s]], dtype=complex))
    else:
        omega = np.exp(2j * np.pi / d)
        k = np.arange(d)
        for m in range(d):
            cols = [omega ** ((m * k * k + j * k) % d) / np.sqrt(d)
                    for j in range(d)]
            bases.append(np.column_stack(cols))
    _check_mub(bases, d)
    return bases


def _check_mub(bases, d, tol=1e-10):
    for b, basis in enumerate(bases):
        g = basis.conj().T @ basis
        if frobenius(g - np.eye(d)) > tol:
            raise ValueError(f"basis {b} is not orthonormal")
    for b1 in range(len(bases)):
        for b2 in range(b1 + 1, len(bases)):
            ov = np.abs(bases[b1].conj().T @ bases[b2]) ** 2
            if float(np.max(np.abs(ov - 1.0 / d))) > tol:
                raise ValueError(
                    f"bases {b1},{b2} are not mutually unbiased")


def mub_povm(bases) -> Povm:
    """E_{b,k} = (1/(d+1)) |b,k><b,k| over all d(d+1) MUB vectors."""
    d = bases[0].shape[0]
    _check_mub(bases, d, tol=1e-8)
    effects = []
    labels = []
    states = []
    for b, basis in enumerate(bases):
        for k in range(d):
            v = basis[:, k]
            effects.append(np.outer(v, v.conj()) / (d + 1))
            labels.append(f"b={b} k={k}")
            states.append(v)
    return Povm(dim=d, effects=tuple(effects), labels=tuple(labels),
                provenance={"kind": "MUB", "bases": len(bases)},
                outcome_states=tuple(states))


def computational_povm(d: int) -> Povm:
    """Projective measurement in the computational basis."""
    eye = np.eye(d, dtype=complex)
    effects = tuple(np.outer(eye[:, m], eye[:, m].conj()) for m in range(d))
    states = tuple(eye[:, m].copy() for m in range(d))
    return Povm(dim=d, effects=effects,
                labels=tuple(f"|{m}>" for m in range(d)),
                provenance={"kind": "computational"},
                outcome_states=states)


def _complex_pairs(arr: np.ndarray):
    return [[float(c.real), float(c.imag)] for c in np.asarray(arr).reshape(-1)]


def fiducial_to_json(f: FiducialVector) -> dict:
    return {"dim": f.dim,
            "amplitudes": _complex_pairs(f.amplitudes),
            "zauner_residual": f.zauner_residual,
            "converged": f.converged}


def fiducial_from_json(obj: dict) -> FiducialVector:
    amps = np.array([re + 1j * im for re, im in obj["amplitudes"]])
    return FiducialVector(dim=obj["dim"], amplitudes=amps,
                          zauner_residual=obj["zauner_residual"],
                          converged=obj.get("converged", True))


def povm_to_json(p: Povm) -> dict:
    return {"dim": p.dim,
            "labels": list(p.labels),
            "effects": [_complex_pairs(e) for e in p.effects],
            "provenance": {k: v for k, v in p.provenance.items()}}


def povm_from_json(obj: dict) -> Povm:
    d = obj["dim"]
    effects = []
    for flat in obj["effects"]:
        e = np.array([re + 1j * im for re, im in flat]).reshape(d, d)
        effects.append(e)
    return Povm(dim=d, effects=tuple(effects), labels=tuple(obj["labels"]),
                provenance=obj.get("provenance", {}))
