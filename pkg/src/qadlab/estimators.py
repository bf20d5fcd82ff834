"""Born-rule sampling and the three single-copy estimators: standard
projector, group-averaged, and the ensemble-expected estimator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import GroupRep
from .linalg import DensityMatrix, pure_state_density
from .povm import Povm


@dataclass(frozen=True)
class BornDistribution:
    """Outcome probabilities p_m = Tr(rho E_m) for a fixed POVM."""

    probabilities: np.ndarray
    povm: Povm

    def __post_init__(self):
        total = float(self.probabilities.sum())
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"probabilities sum to {total}, not 1")
        if float(self.probabilities.min()) < 0.0:
            raise ValueError("negative probability after clipping")


@dataclass(frozen=True)
class Outcome:
    """A sampled POVM outcome: its index and the rank-1 direction of E_m."""

    index: int
    state: np.ndarray


def born_probabilities(rho: DensityMatrix, povm: Povm) -> BornDistribution:
    if rho.dim != povm.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {povm.dim}")
    p = np.array([float(np.trace(rho.mat @ e).real) for e in povm.effects])
    if float(p.min()) < -1e-12:
        raise ValueError(f"Born probability {p.min():.3e} below tolerance")
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    return BornDistribution(probabilities=p, povm=povm)


def _outcome_state(povm: Povm, m: int) -> np.ndarray:
    if povm.outcome_states is not None:
        return povm.outcome_states[m]
    e = povm.effects[m]
    w, v = np.linalg.eigh(0.5 * (e + e.conj().T))
    if w[-2] > 1e-10 * max(w[-1], 1e-300):
        raise ValueError(
            f"effect {m} has rank > 1; outcome state undefined")
    return v[:, -1]


def sample_outcome(dist: BornDistribution, rng: np.random.Generator) -> Outcome:
    """Inverse-CDF draw over the stored outcome ordering; deterministic
    given the generator state."""
    cdf = np.cumsum(dist.probabilities)
    m = int(np.searchsorted(cdf, rng.random(), side="right"))
    m = min(m, len(dist.probabilities) - 1)
    return Outcome(index=m, state=_outcome_state(dist.povm, m))


def standard_estimator(outcome: Outcome) -> DensityMatrix:
    """Rank-1 projector onto the outcome state (no group averaging)."""
    return pure_state_density(outcome.state)


def qad_estimator(rep: GroupRep, outcome: Outcome) -> DensityMatrix:
    """Group-averaged estimator: (1/|G|) sum_g U_g |phi><phi| U_g†."""
    if rep.dim != outcome.state.shape[0]:
        raise ValueError(
            f"dimension mismatch: {rep.dim} vs {outcome.state.shape[0]}")
    return DensityMatrix(twirl_projector(rep, outcome.state))


def twirl_projector(rep: GroupRep, psi: np.ndarray) -> np.ndarray:
    """(1/|G|) sum_g U_g |psi><psi| U_g† as a raw matrix."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    v = v / np.linalg.norm(v)
    d = rep.dim
    acc = np.zeros((d, d), dtype=complex)
    for u in rep.elements:
        w = u @ v
        acc += np.outer(w, w.conj())
    return acc / len(rep)


def expected_estimator(rho: DensityMatrix, rep: GroupRep,
                       povm: Povm) -> DensityMatrix:
    """E[rho_hat_G] = sum_m p_m (1/|G|) sum_g U_g |phi_m><phi_m| U_g†.

    Requires a rank-1 POVM so the outcome states are well defined.
    """
    dist = born_probabilities(rho, povm)
    d = rho.dim
    acc = np.zeros((d, d), dtype=complex)
    for m, pm in enumerate(dist.probabilities):
        if pm == 0.0:
            # the outcome state is still required to exist (rank-1 contract)
            _outcome_state(povm, m)
            continue
        acc += pm * twirl_projector(rep, _outcome_state(povm, m))
    return DensityMatrix(acc)
