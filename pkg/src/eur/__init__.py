"""Entropic uncertainty lower bounds with quantum memories.

Library for computing uncertainty sums of multiple measurements held against
quantum memories, four families of lower bounds on them, the combined optimal
bound, generalized-measurement (POVM) analogues, and two applications:
unilateral-coherence trade-offs and secret-key-rate bounds.  A command-line
interface (``eur``) reproduces the bundled example configurations and seeded
Monte Carlo sweeps.
"""

from .applications import (CoherenceReport, KeyRateReport, coherence_sum_bound,
                           devetak_winter_rhs, key_rate_bounds,
                           unilateral_coherence)
from .bounds import (LB1, LB2, BoundReport, DifferenceReport, MemoryPartition,
                     PovmPairBounds, Theorem1Result, difference_report, lb1,
                     lb2, optimal_bound, povm_bipartite_bounds, theorem1_bound,
                     theorem4_bound, uncertainty_lhs)
from .complementarity import (MajorizationData, MixingFamily, Q_VARIANTS,
                              chain_b, majorization_data, q_mu, q_optimized,
                              q_povm_state, q_state, q_tilde, q_variant,
                              xiao_admixture_term)
from .errors import NumericError, ValidationError
from .measurement import (OverlapData, Povm, ProjectiveMeasurement,
                          holevo_quantity, is_mub_family,
                          measured_conditional_entropy, measurement_from_json,
                          measurement_to_json, outcome_probabilities,
                          overlap_matrix, povm_cq_state, projective_cq_state,
                          random_projective_measurement)
from .qstate import (DensityMatrix, ProbabilityVector, RandomStateRecipe,
                     SystemDims, conditional_entropy, mutual_information,
                     partial_trace, purify, random_density_state,
                     shannon_entropy, state_from_json, state_to_json, tensor,
                     von_neumann_entropy)

__version__ = "0.1.0"

__all__ = [
    "CoherenceReport", "KeyRateReport", "coherence_sum_bound",
    "devetak_winter_rhs", "key_rate_bounds", "unilateral_coherence",
    "LB1", "LB2", "BoundReport", "DifferenceReport", "MemoryPartition",
    "PovmPairBounds", "Theorem1Result", "difference_report", "lb1", "lb2",
    "optimal_bound", "povm_bipartite_bounds", "theorem1_bound",
    "theorem4_bound", "uncertainty_lhs",
    "MajorizationData", "MixingFamily", "Q_VARIANTS", "chain_b",
    "majorization_data", "q_mu", "q_optimized", "q_povm_state", "q_state",
    "q_tilde", "q_variant", "xiao_admixture_term",
    "NumericError", "ValidationError",
    "OverlapData", "Povm", "ProjectiveMeasurement", "holevo_quantity",
    "is_mub_family", "measured_conditional_entropy", "measurement_from_json",
    "measurement_to_json", "outcome_probabilities", "overlap_matrix",
    "povm_cq_state", "projective_cq_state", "random_projective_measurement",
    "DensityMatrix", "ProbabilityVector", "RandomStateRecipe", "SystemDims",
    "conditional_entropy", "mutual_information", "partial_trace", "purify",
    "random_density_state", "shannon_entropy", "state_from_json",
    "state_to_json", "tensor", "von_neumann_entropy",
    "__version__",
]
