"""Dense complex linear algebra for small qubit registers.

Everything is stored as full complex128 arrays.  The qubit convention is
big-endian and used throughout the package: qubit 0 is the most significant
bit of the basis index, so the basis state |q0 q1 ... q_{n-1}> lives at
index sum_k q_k * 2**(n-1-k).

All objects are immutable after construction (arrays are marked read-only)
and every operation is a pure function of its inputs, so values can be
shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

MAX_PURE_QUBITS = 20
MAX_DENSE_QUBITS = 12

NORM_TOL = 1e-10
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-8
SPECTRUM_CUTOFF = 1e-12
PROJECTOR_TOL = 1e-10

# Full spectral positivity checks are O(d^3); above this dimension the
# constructor falls back to checking the diagonal only.
_POSITIVITY_CHECK_DIM = 256


def _readonly(values, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _qubits_for_dim(dim: int, what: str) -> int:
    n = int(round(math.log2(dim))) if dim > 0 else -1
    if n < 0 or 2**n != dim:
        raise ValueError(f"{what} dimension {dim} is not a power of two")
    return n


def check_qubits(indices: Iterable[int], width: int) -> tuple[int, ...]:
    """Validate a qubit index collection against a register width.

    Returns the indices as a tuple (order preserved).  Raises ValueError on
    out-of-range entries or duplicates.
    """
    out = tuple(int(q) for q in indices)
    for q in out:
        if q < 0 or q >= width:
            raise ValueError(f"qubit index {q} outside register of width {width}")
    if len(set(out)) != len(out):
        raise ValueError(f"duplicate qubit indices in {out}")
    return out


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized complex amplitude vector over ``num_qubits`` qubits.

    Invariants checked at construction: the amplitude count is exactly
    ``2**num_qubits`` (at most 20 qubits) and the squared norm is 1 within
    1e-10.
    """

    amplitudes: np.ndarray
    num_qubits: int

    def __post_init__(self) -> None:
        amps = _readonly(np.asarray(self.amplitudes, dtype=complex).reshape(-1))
        n = int(self.num_qubits)
        if n < 1 or n > MAX_PURE_QUBITS:
            raise ValueError(f"num_qubits must be in 1..{MAX_PURE_QUBITS}, got {n}")
        if amps.size != 2**n:
            raise ValueError(
                f"expected {2**n} amplitudes for {n} qubits, got {amps.size}"
            )
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: |psi|^2 = {norm_sq!r}")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "num_qubits", n)

    @classmethod
    def from_amplitudes(cls, values) -> "PureState":
        arr = np.asarray(values, dtype=complex).reshape(-1)
        return cls(arr, _qubits_for_dim(arr.size, "state"))

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> "PureState":
        """Computational basis state |index> on ``num_qubits`` qubits."""
        amps = np.zeros(2**num_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(amps, num_qubits)

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "PureState":
        """Basis state from a bit list, qubit 0 first (big-endian)."""
        n = len(bits)
        index = 0
        for b in bits:
            index = (index << 1) | (int(b) & 1)
        return cls.basis(n, index)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def to_density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(
            np.outer(self.amplitudes, self.amplitudes.conj()), self.num_qubits
        )

    def overlap(self, other: "PureState") -> complex:
        """Inner product <self|other>."""
        if other.dim != self.dim:
            raise ValueError("dimension mismatch in overlap")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"PureState(num_qubits={self.num_qubits})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive operator on a qubit register.

    Hermiticity and trace are always verified (1e-10).  The spectral
    positivity check (all eigenvalues >= -1e-8) runs in full for dimensions
    up to 256; beyond that only the diagonal is inspected, since an O(d^3)
    decomposition per construction would dominate large experiments.
    """

    elements: np.ndarray
    num_qubits: int

    def __post_init__(self) -> None:
        mat = _readonly(np.asarray(self.elements, dtype=complex))
        n = int(self.num_qubits)
        if n < 1 or n > MAX_DENSE_QUBITS:
            raise ValueError(f"num_qubits must be in 1..{MAX_DENSE_QUBITS}, got {n}")
        d = 2**n
        if mat.shape != (d, d):
            raise ValueError(f"expected a {d}x{d} matrix, got shape {mat.shape}")
        herm_defect = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_defect > HERMITICITY_TOL:
            raise ValueError(f"matrix not Hermitian: defect {herm_defect!r}")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace must be 1, got {tr!r}")
        if d <= _POSITIVITY_CHECK_DIM:
            low = float(np.min(np.linalg.eigvalsh(mat)))
        else:
            low = float(np.min(mat.diagonal().real))
        if low < EIGENVALUE_FLOOR:
            raise ValueError(f"operator not positive: eigenvalue {low!r}")
        object.__setattr__(self, "elements", mat)
        object.__setattr__(self, "num_qubits", n)

    @classmethod
    def from_matrix(cls, values) -> "DensityMatrix":
        mat = np.asarray(values, dtype=complex)
        return cls(mat, _qubits_for_dim(mat.shape[0], "density matrix"))

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        return psi.to_density_matrix()

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> "DensityMatrix":
        d = 2**num_qubits
        return cls(np.eye(d, dtype=complex) / d, num_qubits)

    @property
    def dim(self) -> int:
        return self.elements.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Real spectrum in ascending order."""
        return np.linalg.eigvalsh(self.elements)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"DensityMatrix(num_qubits={self.num_qubits})"


@dataclass(frozen=True, eq=False)
class Projector:
    """Hermitian idempotent operator (P^2 = P within 1e-10)."""

    elements: np.ndarray
    rank: int

    def __post_init__(self) -> None:
        mat = _readonly(np.asarray(self.elements, dtype=complex))
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"projector must be square, got shape {mat.shape}")
        if float(np.max(np.abs(mat - mat.conj().T))) > PROJECTOR_TOL:
            raise ValueError("projector not Hermitian")
        if float(np.max(np.abs(mat @ mat - mat))) > PROJECTOR_TOL:
            raise ValueError("projector not idempotent")
        object.__setattr__(self, "elements", mat)
        object.__setattr__(self, "rank", int(self.rank))

    @classmethod
    def from_matrix(cls, values) -> "Projector":
        mat = np.asarray(values, dtype=complex)
        rank = int(round(float(np.trace(mat).real)))
        return cls(mat, rank)

    @classmethod
    def onto_vector(cls, vector) -> "Projector":
        v = np.asarray(vector, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(v)
        if nrm < 1e-12:
            raise ValueError("cannot project onto the zero vector")
        v = v / nrm
        return cls(np.outer(v, v.conj()), 1)

    @classmethod
    def onto_basis_states(cls, dim: int, indices: Iterable[int]) -> "Projector":
        """Sum of |k><k| over the given computational-basis labels."""
        idx = sorted(set(int(k) for k in indices))
        mat = np.zeros((dim, dim), dtype=complex)
        for k in idx:
            if k < 0 or k >= dim:
                raise ValueError(f"basis label {k} outside dimension {dim}")
            mat[k, k] = 1.0
        return cls(mat, len(idx))

    @classmethod
    def onto_span(cls, vectors: Sequence[np.ndarray], tol: float = 1e-10) -> "Projector":
        """Projector onto the closed span of the given vectors."""
        cols = np.column_stack([np.asarray(v, dtype=complex).reshape(-1) for v in vectors])
        u, s, _ = np.linalg.svd(cols, full_matrices=False)
        basis = u[:, s > tol * max(1.0, float(s[0]) if s.size else 1.0)]
        return cls(basis @ basis.conj().T, basis.shape[1])

    @classmethod
    def identity(cls, dim: int) -> "Projector":
        return cls(np.eye(dim, dtype=complex), dim)

    @property
    def dim(self) -> int:
        return self.elements.shape[0]

    def complement(self) -> "Projector":
        return Projector(np.eye(self.dim, dtype=complex) - self.elements, self.dim - self.rank)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Projector(dim={self.dim}, rank={self.rank})"


StateLike = Union[PureState, DensityMatrix]


def tensor_product(a: StateLike, b: StateLike) -> StateLike:
    """Kronecker composition of two states of the same kind.

    The result carries a's qubits first (most significant), then b's.
    """
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(np.kron(a.amplitudes, b.amplitudes), a.num_qubits + b.num_qubits)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.elements, b.elements), a.num_qubits + b.num_qubits)
    raise TypeError("tensor_product requires two PureStates or two DensityMatrices")


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every qubit not listed in ``keep``.

    ``keep`` fixes the qubit order of the result, so it can also be used to
    permute subsystems.  The trace is preserved exactly up to rounding.
    """
    keep_t = check_qubits(keep, rho.num_qubits)
    if not keep_t:
        raise ValueError("keep-set must be nonempty")
    n = rho.num_qubits
    tensor = rho.elements.reshape((2,) * (2 * n))
    in_idx = list(range(2 * n))
    for q in range(n):
        if q not in keep_t:
            in_idx[n + q] = q
    out_idx = [q for q in keep_t] + [n + q for q in keep_t]
    reduced = np.einsum(tensor, in_idx, out_idx)
    d = 2 ** len(keep_t)
    return DensityMatrix(reduced.reshape(d, d), len(keep_t))


def _entropy_bits(eigenvalues: np.ndarray) -> float:
    """Shannon entropy in bits of a spectrum, ignoring weights below 1e-12.

    Eigenvalues in [-1e-8, 0) are clipped to zero; anything more negative is
    an invariant violation and raises.
    """
    eigs = np.asarray(eigenvalues, dtype=float)
    low = float(eigs.min()) if eigs.size else 0.0
    if low < EIGENVALUE_FLOOR:
        raise ValueError(f"spectrum not positive: eigenvalue {low!r}")
    kept = eigs[eigs > SPECTRUM_CUTOFF]
    if kept.size == 0:
        return 0.0
    # An eigenvalue within rounding of 1 may overshoot it and push the sum
    # a few ulp below zero; the entropy is nonnegative by definition.
    return max(0.0, float(-np.sum(kept * np.log2(kept))))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Spectral entropy -Tr(rho log2 rho), in bits."""
    return _entropy_bits(rho.eigenvalues())


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2); 1 for pure states, 2**-n for the maximally mixed state."""
    # For Hermitian rho, Tr(rho^2) = sum |rho_ij|^2.
    return float(np.sum(np.abs(rho.elements) ** 2))


def born_probability(rho: DensityMatrix, projector: Projector) -> float:
    """Outcome probability Tr(P rho) for a projective event.

    Additive over orthogonal projectors; the result is clamped into [0, 1]
    only within a 1e-9 numerical margin and raises beyond it.
    """
    if projector.dim != rho.dim:
        raise ValueError(
            f"projector dimension {projector.dim} does not match state dimension {rho.dim}"
        )
    value = float(np.real(np.einsum("ij,ji->", projector.elements, rho.elements)))
    if value < -1e-9 or value > 1.0 + 1e-9:
        raise ValueError(f"Born probability {value!r} outside [0, 1]")
    return min(1.0, max(0.0, value))
