"""qadlab: single-copy quantum state estimation with group-structured
measurements.
"""

from .ensembles import EnsembleConfig, ginibre_density, ginibre_with_purity, \
    qubit_from_bloch
from .estimators import BornDistribution, Outcome, born_probabilities, \
    expected_estimator, qad_estimator, sample_outcome, standard_estimator
from .gevp import GevpResult, OperatorBasis, adaptive_pipeline, \
    double_commutator_matrix, gell_mann_basis, optimal_generator, solve_gevp
from .groups import GroupRep, build_cyclic_shift, build_heisenberg_weyl, \
    build_involution_pair, build_matched_cyclic, build_pauli_qubit, \
    cayley_operator, commutativity_residual
from .linalg import DensityMatrix, commutator, hermitian_eig, psd_sqrt
from .metrics import StateMetrics, linear_fidelity, numerical_rank, \
    spectral_error, state_metrics, trace_distance, uhlmann_fidelity
from .povm import FiducialVector, Povm, build_group_povm, build_mub, \
    build_sic_povm, computational_povm, find_sic_fiducial, mub_povm

__all__ = [n for n in dir() if not n.startswith("_")]
__version__ = "0.1.0"
