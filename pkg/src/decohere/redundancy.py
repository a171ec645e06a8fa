"""Environment-as-witness analysis of two-branch record states.

Conditional environment records are extracted by projecting the joint
state onto a system state; the redundancy distance between two records is
the least total number of single-qubit Pauli flips (X, Y and Z each count
as one) mapping one onto the other up to a global phase.  The search is
exhaustive over per-qubit flip assignments, enumerated in order of
increasing flip count so the first match is minimal; it is capped at 8
environment qubits (4^8 assignments).

Decoding robustness treats "k errors" as k complete decohering events:
each afflicted qubit suffers the relevant Pauli with probability 1/2
(a bit value, or a relative phase, that has been fully scrambled).  Under
bit-flip events a majority vote in the record basis survives any
minority of flips, while a single phase-flip event erases the sign of the
conjugate record entirely - the two branch ensembles become the same
mixture, so even the most favorable decoder is reduced to a coin toss.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional, Sequence

import numpy as np

from .states import PureState, _readonly, check_qubits

MAX_SEARCH_QUBITS = 8
NULL_WEIGHT = 1e-12
MATCH_TOL = 1e-9

_PARITY_TABLE = np.array([bin(i).count("1") & 1 for i in range(256)], dtype=np.uint8)


def _parity(indices: np.ndarray, mask: int) -> np.ndarray:
    """Popcount parity of ``indices & mask`` for registers up to 8 qubits."""
    return _PARITY_TABLE[indices & mask]


@dataclass(frozen=True, eq=False)
class JointState:
    """Pure state over system (x) environment with an explicit register split."""

    state: PureState
    system: tuple[int, ...]
    environment: tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.state.num_qubits
        sys_q = check_qubits(self.system, n)
        env_q = check_qubits(self.environment, n)
        if sorted(sys_q + env_q) != list(range(n)):
            raise ValueError("system and environment must partition the register")
        object.__setattr__(self, "system", sys_q)
        object.__setattr__(self, "environment", env_q)

    @property
    def environment_size(self) -> int:
        return len(self.environment)


@dataclass(frozen=True, eq=False)
class EnvironmentRecord:
    """Conditional environment state with its probability weight.

    A weight at or below 1e-12 marks a null record; null records carry a
    zero amplitude vector and are rejected by the distance search.
    """

    amplitudes: np.ndarray
    weight: float
    num_qubits: int

    def __post_init__(self) -> None:
        amps = _readonly(np.asarray(self.amplitudes, dtype=complex).reshape(-1))
        if amps.size != 2**self.num_qubits:
            raise ValueError("record length does not match qubit count")
        w = float(self.weight)
        if w < 0 or w > 1 + 1e-9:
            raise ValueError(f"weight must lie in [0, 1], got {w!r}")
        if w > NULL_WEIGHT:
            norm_sq = float(np.sum(np.abs(amps) ** 2))
            if abs(norm_sq - 1.0) > 1e-9:
                raise ValueError("non-null record must be normalized")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "weight", w)

    @property
    def is_null(self) -> bool:
        return self.weight <= NULL_WEIGHT


@dataclass(frozen=True)
class FlipSequence:
    """Per-qubit flip assignment with its X/Y/Z counts."""

    labels: tuple[str, ...]
    n_x: int
    n_y: int
    n_z: int

    def __post_init__(self) -> None:
        for lab in self.labels:
            if lab not in ("I", "X", "Y", "Z"):
                raise ValueError(f"unknown flip label {lab!r}")
        counts = {
            "X": self.labels.count("X"),
            "Y": self.labels.count("Y"),
            "Z": self.labels.count("Z"),
        }
        if (self.n_x, self.n_y, self.n_z) != (counts["X"], counts["Y"], counts["Z"]):
            raise ValueError("flip counts do not match labels")

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> "FlipSequence":
        labs = tuple(labels)
        return cls(labs, labs.count("X"), labs.count("Y"), labs.count("Z"))

    @property
    def total_flips(self) -> int:
        return self.n_x + self.n_y + self.n_z


def environment_record(joint: JointState, phi: PureState) -> EnvironmentRecord:
    """Conditional environment state <phi|Psi>, normalized, with its weight.

    The weight is the probability mass |<phi|Psi>|^2; a vanishing weight
    yields a flagged null record rather than a silently normalized one.
    """
    n = joint.state.num_qubits
    n_sys = len(joint.system)
    if phi.num_qubits != n_sys:
        raise ValueError(
            f"conditioning state has {phi.num_qubits} qubits, system has {n_sys}"
        )
    tensor = joint.state.amplitudes.reshape((2,) * n)
    phi_tensor = phi.amplitudes.conj().reshape((2,) * n_sys)
    sys_axes = list(joint.system)
    env_axes = list(joint.environment)
    raw = np.einsum(tensor, list(range(n)), phi_tensor, sys_axes, env_axes)
    raw = raw.reshape(-1)
    weight = float(np.sum(np.abs(raw) ** 2))
    n_env = len(env_axes)
    if weight <= NULL_WEIGHT:
        return EnvironmentRecord(np.zeros(2**n_env, dtype=complex), 0.0, n_env)
    return EnvironmentRecord(raw / math.sqrt(weight), weight, n_env)


def _flip_overlap(
    a: np.ndarray, b_conj: np.ndarray, indices: np.ndarray, x_mask: int, z_mask: int
) -> float:
    """|<b| P |a>| for the Pauli string with the given X/Z masks.

    P acts as |j> -> (-1)^parity(j & z_mask) |j ^ x_mask| up to a global
    phase, which cannot change the overlap magnitude.
    """
    shifted = b_conj[indices ^ x_mask]
    signs = 1.0 - 2.0 * _parity(indices, z_mask).astype(float)
    return abs(np.sum(shifted * signs * a))


def minimal_flip_sequence(
    a: EnvironmentRecord, b: EnvironmentRecord
) -> Optional[FlipSequence]:
    """Smallest flip assignment mapping record ``a`` onto ``b`` up to phase.

    Assignments are enumerated in order of increasing total flip count, so
    the first hit is minimal.  Returns None when no assignment reaches unit
    overlap magnitude (within 1e-9).
    """
    if a.is_null or b.is_null:
        raise ValueError("null records have no flip distance")
    if a.num_qubits != b.num_qubits:
        raise ValueError("records must live on equally sized environments")
    n = a.num_qubits
    if n > MAX_SEARCH_QUBITS:
        raise ValueError(f"flip search capped at {MAX_SEARCH_QUBITS} qubits, got {n}")

    indices = np.arange(2**n, dtype=np.intp)
    b_conj = b.amplitudes.conj()
    # Qubit q is the (n-1-q)-th bit of the basis index (big-endian).
    bit_of = [1 << (n - 1 - q) for q in range(n)]

    for flips in range(n + 1):
        for qubits in combinations(range(n), flips):
            for paulis in product("XYZ", repeat=flips):
                x_mask = 0
                z_mask = 0
                for q, p in zip(qubits, paulis):
                    if p != "Z":
                        x_mask |= bit_of[q]
                    if p != "X":
                        z_mask |= bit_of[q]
                if _flip_overlap(a.amplitudes, b_conj, indices, x_mask, z_mask) >= 1.0 - MATCH_TOL:
                    labels = ["I"] * n
                    for q, p in zip(qubits, paulis):
                        labels[q] = p
                    return FlipSequence.from_labels(labels)
    return None


def redundancy_distance(a: EnvironmentRecord, b: EnvironmentRecord) -> float:
    """Least total number of single-qubit flips converting ``a`` into ``b``.

    Returns math.inf when no per-qubit flip assignment connects the two
    records (possible when they differ in entanglement structure).
    """
    seq = minimal_flip_sequence(a, b)
    return math.inf if seq is None else float(seq.total_flips)


@dataclass(frozen=True, eq=False)
class MetricAxiomReport:
    distances: np.ndarray
    violations: tuple[str, ...]

    @property
    def satisfied(self) -> bool:
        return not self.violations


def verify_metric_axioms(records: Sequence[EnvironmentRecord]) -> MetricAxiomReport:
    """Check nonnegativity, symmetry and the triangle inequality over all triples."""
    if len(records) < 3:
        raise ValueError("need at least three records to exercise the axioms")
    m = len(records)
    dist = np.zeros((m, m), dtype=float)
    for i in range(m):
        for j in range(i + 1, m):
            dist[i, j] = redundancy_distance(records[i], records[j])
            dist[j, i] = redundancy_distance(records[j], records[i])

    violations: list[str] = []
    for i in range(m):
        for j in range(m):
            if dist[i, j] < 0:
                violations.append(f"negative distance d({i},{j}) = {dist[i, j]}")
            if dist[i, j] != dist[j, i]:
                violations.append(
                    f"asymmetry d({i},{j}) = {dist[i, j]} != d({j},{i}) = {dist[j, i]}"
                )
    for i, j, k in product(range(m), repeat=3):
        if dist[i, j] + dist[j, k] < dist[i, k] - 1e-12:
            violations.append(
                f"triangle violation d({i},{j}) + d({j},{k}) < d({i},{k})"
            )
    return MetricAxiomReport(_readonly(dist, dtype=float), tuple(violations))


def majority_decode(outcome_bits: Sequence[int]) -> int:
    """Majority symbol of an odd-length 0/1 list."""
    bits = [int(b) for b in outcome_bits]
    if len(bits) % 2 == 0:
        raise ValueError("majority vote needs an odd number of outcomes")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("outcomes must be 0 or 1")
    return 1 if sum(bits) * 2 > len(bits) else 0


def _record_basis_index(record: EnvironmentRecord) -> int:
    """Basis label of a computational-basis record (up to phase)."""
    idx = int(np.argmax(np.abs(record.amplitudes)))
    if abs(abs(record.amplitudes[idx]) - 1.0) > MATCH_TOL:
        raise ValueError("record is not a computational basis state")
    return idx


def _check_two_branch(joint: JointState) -> tuple[EnvironmentRecord, EnvironmentRecord]:
    if len(joint.system) != 1:
        raise ValueError("decoding robustness expects a single system qubit")
    r0 = environment_record(joint, PureState.basis(1, 0))
    r1 = environment_record(joint, PureState.basis(1, 1))
    if r0.is_null or r1.is_null:
        raise ValueError("state is not a two-branch record state")
    n = joint.environment_size
    if _record_basis_index(r0) != 0 or _record_basis_index(r1) != 2**n - 1:
        raise ValueError("expected all-zeros / all-ones environment records")
    return r0, r1


def error_robustness(joint: JointState, basis: str, k: int) -> float:
    """Fraction of k-error patterns from which the system bit is still decodable.

    ``basis`` selects the decoding sector: "pointer" applies bit-flip
    events and decodes by majority vote in the record basis; "hadamard"
    applies phase-flip events and infers the record sign from a full
    |+>/|-> measurement with the best outcome-by-outcome decoder.  Every
    pattern of k afflicted environment qubits is enumerated and the mean
    per-pattern success probability is returned.
    """
    n = joint.environment_size
    if k < 0 or k > n:
        raise ValueError(f"error count {k} outside 0..{n}")
    if n > MAX_SEARCH_QUBITS:
        raise ValueError(f"pattern enumeration capped at {MAX_SEARCH_QUBITS} qubits")
    _check_two_branch(joint)

    if basis == "pointer":
        return _pointer_robustness(n, k)
    if basis == "hadamard":
        return _hadamard_robustness(joint, n, k)
    raise ValueError(f"unknown decoding basis {basis!r}")


def _pointer_robustness(n: int, k: int) -> float:
    """Majority decode under k bit-value-scrambling events, exact average."""
    total = 0.0
    patterns = 0
    for pattern in combinations(range(n), k):
        correct = 0
        for flips in product((0, 1), repeat=k):
            bits0 = [0] * n
            bits1 = [1] * n
            for q, f in zip(pattern, flips):
                bits0[q] ^= f
                bits1[q] ^= f
            if majority_decode(bits0) == 0:
                correct += 1
            if majority_decode(bits1) == 1:
                correct += 1
        total += correct / (2 ** (k + 1))
        patterns += 1
    return total / patterns


def _hadamard_basis_matrix(n: int) -> np.ndarray:
    h1 = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    mat = h1
    for _ in range(n - 1):
        mat = np.kron(mat, h1)
    return mat


def _hadamard_robustness(joint: JointState, n: int, k: int) -> float:
    """Best-decoder sign inference under k phase-scrambling events."""
    plus = PureState.from_amplitudes(np.array([1.0, 1.0]) / math.sqrt(2.0))
    minus = PureState.from_amplitudes(np.array([1.0, -1.0]) / math.sqrt(2.0))
    e_plus = environment_record(joint, plus).amplitudes
    e_minus = environment_record(joint, minus).amplitudes

    indices = np.arange(2**n, dtype=np.intp)
    bit_of = [1 << (n - 1 - q) for q in range(n)]
    frame = _hadamard_basis_matrix(n)

    total = 0.0
    patterns = 0
    for pattern in combinations(range(n), k):
        dists = []
        for branch in (e_plus, e_minus):
            dist = np.zeros(2**n)
            for signs in product((0, 1), repeat=k):
                z_mask = 0
                for q, s in zip(pattern, signs):
                    if s:
                        z_mask |= bit_of[q]
                flipped = branch * (1.0 - 2.0 * _parity(indices, z_mask).astype(float))
                dist += np.abs(frame @ flipped) ** 2
            dists.append(dist / (2**k))
        # Optimal outcome-by-outcome guess between the two equiprobable branches.
        total += 0.5 * float(np.sum(np.maximum(dists[0], dists[1])))
        patterns += 1
    return total / patterns
