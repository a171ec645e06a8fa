"""Exact small-register simulator for decoherence and einselection studies.

Subpackages by theme: ``states`` (dense linear algebra), ``circuits``
(premeasurement / monitoring / noise chains), ``dephasing`` (pointer-basis
channels), ``redundancy`` (environment records and flip distances),
``sieve`` (predictability horizons and ranking), ``probability`` (outcome
statistics after decoherence), ``records`` (observer-memory models), and
``cli`` (the deterministic experiment runner).
"""

__version__ = "0.1.0"

from .circuits import Circuit, Gate, apply, decoherence_chain, noise_chain, premeasurement
from .dephasing import (
    DephasingChannel,
    HamiltonianSpec,
    channel_from_spec,
    decohered_limit,
    dephase,
    pointer_commutator_defect,
)
from .probability import (
    CoarseGraining,
    ProbabilityVector,
    coarse_grain,
    conditional_product_check,
    permutation_distinguishability,
    reconstruct_reduced,
    sum_rule_violation,
    uniform_outcome_probabilities,
)
from .records import (
    MemoryModel,
    RecordSequence,
    branch_count,
    compressibility_proxy,
    conditional_g,
    correlate,
    outcome_horizon,
    record_consensus,
    redundant_records,
)
from .redundancy import (
    EnvironmentRecord,
    FlipSequence,
    JointState,
    environment_record,
    error_robustness,
    majority_decode,
    minimal_flip_sequence,
    redundancy_distance,
    verify_metric_axioms,
)
from .sieve import (
    DynamicsSpec,
    EntropyTrajectory,
    Horizon,
    SieveReport,
    bloch_grid,
    bloch_state,
    evolve_entropy,
    predictability_horizon,
    purity_horizon,
    sieve_rank,
    uniform_grid,
)
from .states import (
    DensityMatrix,
    Projector,
    PureState,
    born_probability,
    partial_trace,
    purity,
    tensor_product,
    von_neumann_entropy,
)
