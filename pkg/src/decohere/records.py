"""Observer-memory model: record correlations, their lifetime, and branches.

A memory model pairs each outcome with a system state and an orthogonal
record state.  After decoherence the joint state is the classically
correlated block mixture sum_i p_i |s_i><s_i| (x) |mu_i><mu_i| (system
qubits first, then memory).  On top of that the module computes the
predictive conditional probability g(t), per-outcome predictability
horizons, replicated (redundant) records, branch counting in the pointer
versus the conjugate record basis, and a deterministic compressibility
proxy for record sequences (an ideal-code-length stand-in for the
uncomputable algorithmic information content).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .dephasing import DephasingChannel, decohered_limit
from .probability import ProbabilityVector
from .sieve import (
    DynamicsSpec,
    Horizon,
    evolve_entropy,
    predictability_horizon,
    purity_horizon,
)
from .states import (
    DensityMatrix,
    Projector,
    PureState,
    partial_trace,
)

RECORD_ORTHOGONALITY_TOL = 1e-10
UNDEFINED_CONDITIONAL = float("nan")


RecordState = Union[PureState, DensityMatrix]


def _record_matrix(record: RecordState) -> np.ndarray:
    if isinstance(record, PureState):
        return np.outer(record.amplitudes, record.amplitudes.conj())
    return record.elements


@dataclass(frozen=True, eq=False)
class MemoryModel:
    """Outcome probabilities with their system and record states.

    Records may be pure states or (coarse-grained) density matrices; in
    either case distinct outcomes must occupy orthogonal supports within
    1e-10 - a memory whose entries cannot be told apart stores nothing.
    """

    probabilities: ProbabilityVector
    system_states: tuple[PureState, ...]
    record_states: tuple[RecordState, ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        k = len(self.probabilities)
        if len(self.system_states) != k or len(self.record_states) != k:
            raise ValueError("need one system state and one record state per outcome")
        if self.labels is not None and len(self.labels) != k:
            raise ValueError("need one label per outcome")
        sys_n = {s.num_qubits for s in self.system_states}
        rec_n = {r.num_qubits for r in self.record_states}
        if len(sys_n) != 1 or len(rec_n) != 1:
            raise ValueError("system and record registers must each have fixed width")
        for i in range(k):
            for j in range(i + 1, k):
                a, b = self.record_states[i], self.record_states[j]
                if isinstance(a, PureState) and isinstance(b, PureState):
                    defect = abs(a.overlap(b))
                else:
                    defect = float(
                        np.real(np.trace(_record_matrix(a) @ _record_matrix(b)))
                    )
                if defect > RECORD_ORTHOGONALITY_TOL:
                    raise ValueError(
                        f"record states {i} and {j} not orthogonal: defect {defect!r}"
                    )

    @property
    def outcome_count(self) -> int:
        return len(self.probabilities)

    @property
    def system_qubits(self) -> int:
        return self.system_states[0].num_qubits

    @property
    def record_qubits(self) -> int:
        return self.record_states[0].num_qubits


def correlate(model: MemoryModel) -> DensityMatrix:
    """Classically correlated system-memory state sum_i p_i s_i (x) mu_i.

    Block-diagonal in the record basis; the fixed point of any dephasing
    channel whose pointer frame contains the record states.
    """
    total = None
    for i in range(model.outcome_count):
        sys_mat = _record_matrix(model.system_states[i])
        block = model.probabilities[i] * np.kron(
            sys_mat, _record_matrix(model.record_states[i])
        )
        total = block if total is None else total + block
    return DensityMatrix(total, model.system_qubits + model.record_qubits)


def conditional_g(
    rho_sm: DensityMatrix, record: Projector, proposition: Projector
) -> float:
    """Predictive conditional probability p(sigma, mu) / p(mu).

    ``proposition`` acts on the system factor, ``record`` on the memory
    factor; both are extended by identity on the other factor.  Returns
    NaN (the undefined-conditional flag) when the record has no weight.
    """
    if proposition.dim * record.dim != rho_sm.dim:
        raise ValueError(
            "proposition and record dimensions must factor the joint state"
        )
    record_full = np.kron(np.eye(proposition.dim, dtype=complex), record.elements)
    joint_full = np.kron(proposition.elements, record.elements)
    p_record = float(np.real(np.trace(record_full @ rho_sm.elements)))
    if p_record < 1e-12:
        return UNDEFINED_CONDITIONAL
    p_joint = float(np.real(np.trace(joint_full @ rho_sm.elements)))
    return p_joint / p_record


def _record_support_projector(record: RecordState) -> Projector:
    if isinstance(record, PureState):
        return Projector.onto_vector(record.amplitudes)
    eigvals, eigvecs = np.linalg.eigh(record.elements)
    support = eigvecs[:, eigvals > 1e-12]
    return Projector(support @ support.conj().T, support.shape[1])


def conditional_system_state(
    rho_sm: DensityMatrix, model: MemoryModel, outcome: int
) -> DensityMatrix:
    """Renormalized system state conditioned on one record outcome's support."""
    rec_proj = _record_support_projector(model.record_states[outcome])
    full = np.kron(np.eye(2**model.system_qubits, dtype=complex), rec_proj.elements)
    pinched = full @ rho_sm.elements @ full
    weight = float(np.real(np.trace(pinched)))
    if weight < 1e-12:
        raise ValueError(f"outcome {outcome} has no weight in the joint state")
    pinched = pinched / weight
    sys_qubits = range(model.system_qubits)
    return partial_trace(
        DensityMatrix(pinched, model.system_qubits + model.record_qubits), sys_qubits
    )


def outcome_horizon(
    model: MemoryModel,
    dynamics: DynamicsSpec,
    outcome: int,
    measure: str = "entropy",
) -> Horizon:
    """Predictability horizon of one outcome's conditional system state.

    The system factor evolves under ``dynamics`` while the record is held
    perfectly (no amnesia); the horizon of the conditional state is then
    the same normalized relaxation integral used by the sieve, with
    ``measure`` selecting the entropy or the purity functional.  Horizons
    can and typically will differ between outcomes.
    """
    rho_sm = correlate(model)
    conditional = conditional_system_state(rho_sm, model, outcome)
    trajectory = evolve_entropy(conditional, dynamics)
    if measure == "entropy":
        return predictability_horizon(trajectory)
    if measure == "purity":
        return purity_horizon(trajectory)
    raise ValueError(f"unknown horizon measure {measure!r}")


def redundant_records(model: MemoryModel, cells: int) -> DensityMatrix:
    """Joint state with each outcome's record replicated across ``cells`` cells."""
    if cells < 1:
        raise ValueError("need at least one memory cell")
    total = None
    for i in range(model.outcome_count):
        rec_mat = _record_matrix(model.record_states[i])
        replicated = rec_mat
        for _ in range(cells - 1):
            replicated = np.kron(replicated, rec_mat)
        block = model.probabilities[i] * np.kron(
            _record_matrix(model.system_states[i]), replicated
        )
        total = block if total is None else total + block
    return DensityMatrix(total, model.system_qubits + cells * model.record_qubits)


def _record_register_state(
    model: MemoryModel, record_basis: str, cells: int
) -> np.ndarray:
    """Density matrix of the bare record register for replicated records."""
    width = model.record_qubits
    cell_mats = [_record_matrix(r) for r in model.record_states]
    if record_basis == "conjugate":
        h1 = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)
        frame = h1
        for _ in range(width - 1):
            frame = np.kron(frame, h1)
        cell_mats = [frame @ m @ frame.conj().T for m in cell_mats]
    elif record_basis != "pointer":
        raise ValueError(f"unknown record basis {record_basis!r}")

    dim = 2 ** (cells * width)
    rho = np.zeros((dim, dim), dtype=complex)
    for p_i, cell in zip(model.probabilities.values, cell_mats):
        mat = cell
        for _ in range(cells - 1):
            mat = np.kron(mat, cell)
        rho += p_i * mat
    return rho


def branch_count(
    model: MemoryModel,
    record_basis: str,
    cells: int,
    channel: Optional[DephasingChannel] = None,
    threshold: float = 1e-6,
) -> int:
    """Number of surviving branches after the record register decoheres.

    Records are written in the pointer or the conjugate (Hadamard) basis,
    replicated over ``cells`` cells, then decohered in the register's
    einselected computational basis; branches are diagonal entries heavier
    than ``threshold``.  Pointer records keep one branch per outcome;
    conjugate records explode into 2^cells branches.
    """
    min_p = float(model.probabilities.values.min())
    if not (0.0 < threshold < min_p):
        raise ValueError(f"threshold must lie in (0, {min_p}), got {threshold!r}")
    rho = _record_register_state(model, record_basis, cells)
    width = cells * model.record_qubits
    if channel is not None:
        if channel.dim != rho.shape[0]:
            raise ValueError("channel dimension does not match the record register")
        limit = decohered_limit(DensityMatrix(rho, width), channel)
        weights = limit.elements.diagonal().real
    else:
        weights = rho.diagonal().real
    return int(np.sum(weights > threshold))


def record_consensus(model: MemoryModel, cells: int, basis: str) -> float:
    """Probability that all replicated cells agree when read in ``basis``.

    Reading replicated records in the basis they were einselected in gives
    perfect accord; reading them in the conjugate basis scatters the cells
    independently.
    """
    if model.record_qubits != 1:
        raise ValueError("consensus check expects single-qubit record cells")
    rho = _record_register_state(model, "pointer", cells)
    if basis == "conjugate":
        h1 = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)
        frame = h1
        for _ in range(cells - 1):
            frame = np.kron(frame, h1)
        rho = frame.conj().T @ rho @ frame
    elif basis != "pointer":
        raise ValueError(f"unknown readout basis {basis!r}")
    weights = rho.diagonal().real
    agree = weights[0] + weights[-1]  # all-zeros and all-ones strings
    return float(agree)


@dataclass(frozen=True, eq=False)
class RecordSequence:
    """Composite record: outcome symbols over time, with a declared alphabet."""

    symbols: tuple
    alphabet: tuple

    def __post_init__(self) -> None:
        alpha = tuple(self.alphabet)
        if len(alpha) < 2 or len(set(alpha)) != len(alpha):
            raise ValueError("alphabet must hold at least two distinct symbols")
        syms = tuple(self.symbols)
        allowed = set(alpha)
        if any(s not in allowed for s in syms):
            raise ValueError("sequence contains symbols outside the alphabet")
        object.__setattr__(self, "symbols", syms)
        object.__setattr__(self, "alphabet", alpha)

    def __len__(self) -> int:
        return len(self.symbols)

    @classmethod
    def constant(cls, symbol, length: int, alphabet: Sequence) -> "RecordSequence":
        return cls((symbol,) * length, tuple(alphabet))


def _run_lengths(symbols: Sequence) -> list[tuple[object, int]]:
    runs: list[tuple[object, int]] = []
    for s in symbols:
        if runs and runs[-1][0] == s:
            runs[-1] = (s, runs[-1][1] + 1)
        else:
            runs.append((s, 1))
    return runs


def compressibility_proxy(sequence: RecordSequence) -> float:
    """Compressed/raw length ratio under a fixed two-stage ideal coder.

    Stage one run-length encodes the sequence; stage two charges each run
    log2(A-1) bits for its symbol (the first run gets log2(A)) plus the
    order-0 empirical entropy of the run-length stream.  Raw cost is
    log2(A) bits per symbol.  The result is a deterministic proxy - it is
    explicitly not the algorithmic information content, but it separates
    derivable records (trivially compressible) from algorithmically random
    ones (ratio near 1).
    """
    if len(sequence) < 16:
        raise ValueError("sequence too short for a stable ratio (need >= 16 symbols)")
    a = len(sequence.alphabet)
    runs = _run_lengths(sequence.symbols)
    counts = Counter(length for _, length in runs)
    n_runs = len(runs)
    length_entropy = 0.0
    for c in counts.values():
        freq = c / n_runs
        length_entropy -= freq * math.log2(freq)
    bits = math.log2(a) + (n_runs - 1) * math.log2(a - 1) + n_runs * length_entropy
    raw_bits = len(sequence) * math.log2(a)
    ratio = bits / raw_bits
    if not (0.0 < ratio <= 1.2):
        raise AssertionError(f"compressibility ratio {ratio!r} escaped (0, 1.2]")
    return ratio
