"""Gate-level circuits: bit-by-bit premeasurement, monitoring, and noise.

Gates are abstract records expanded on demand; application to a state uses
index arithmetic on the amplitude tensor, so registers up to the pure-state
cap stay cheap.  Circuits are plain data - inspectable and serializable to
a line-oriented text form (one gate per line, e.g. ``CNOT 0 1``, ``H 2``)
used in experiment logs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Union

import numpy as np

from .states import PureState, check_qubits

_SQRT_HALF = 1.0 / np.sqrt(2.0)


class GateKind(str, Enum):
    PAULI_X = "X"
    PAULI_Y = "Y"
    PAULI_Z = "Z"
    HADAMARD = "H"
    CNOT = "CNOT"


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    target: int
    control: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind is GateKind.CNOT:
            if self.control is None:
                raise ValueError("CNOT requires a control qubit")
            if self.control == self.target:
                raise ValueError("control and target must differ")
        elif self.control is not None:
            raise ValueError(f"{self.kind.value} gate takes no control qubit")

    def to_text(self) -> str:
        if self.kind is GateKind.CNOT:
            return f"CNOT {self.control} {self.target}"
        return f"{self.kind.value} {self.target}"


def x(target: int) -> Gate:
    return Gate(GateKind.PAULI_X, target)


def y(target: int) -> Gate:
    return Gate(GateKind.PAULI_Y, target)


def z(target: int) -> Gate:
    return Gate(GateKind.PAULI_Z, target)


def h(target: int) -> Gate:
    return Gate(GateKind.HADAMARD, target)


def cnot(control: int, target: int) -> Gate:
    return Gate(GateKind.CNOT, target, control)


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over a register of fixed width."""

    gates: tuple[Gate, ...]
    width: int

    def __post_init__(self) -> None:
        gates = tuple(self.gates)
        for g in gates:
            touched = (g.target,) if g.control is None else (g.control, g.target)
            check_qubits(touched, self.width)
        object.__setattr__(self, "gates", gates)

    def to_text(self) -> str:
        return "\n".join(g.to_text() for g in self.gates)

    @classmethod
    def from_text(cls, text: str, width: int) -> "Circuit":
        gates = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            name = parts[0].upper()
            try:
                kind = GateKind(name)
            except ValueError:
                raise ValueError(f"line {lineno}: unknown gate {name!r}") from None
            if kind is GateKind.CNOT:
                if len(parts) != 3:
                    raise ValueError(f"line {lineno}: CNOT takes control and target")
                gates.append(cnot(int(parts[1]), int(parts[2])))
            else:
                if len(parts) != 2:
                    raise ValueError(f"line {lineno}: {name} takes one qubit")
                gates.append(Gate(kind, int(parts[1])))
        return cls(tuple(gates), width)

    def as_matrix(self) -> np.ndarray:
        """Full-register unitary, built column by column."""
        d = 2**self.width
        mat = np.zeros((d, d), dtype=complex)
        for j in range(d):
            mat[:, j] = apply(PureState.basis(self.width, j), self).amplitudes
        return mat


def _apply_gate(amps: np.ndarray, gate: Gate, width: int) -> np.ndarray:
    """Apply one gate in place on a writable amplitude tensor view."""
    arr = amps.reshape((2,) * width)
    t = gate.target
    if gate.kind is GateKind.PAULI_X:
        lo = np.take(arr, 0, axis=t)
        hi = np.take(arr, 1, axis=t)
        _assign(arr, t, 0, hi)
        _assign(arr, t, 1, lo)
    elif gate.kind is GateKind.PAULI_Y:
        lo = np.take(arr, 0, axis=t)
        hi = np.take(arr, 1, axis=t)
        _assign(arr, t, 0, -1j * hi)
        _assign(arr, t, 1, 1j * lo)
    elif gate.kind is GateKind.PAULI_Z:
        hi = np.take(arr, 1, axis=t)
        _assign(arr, t, 1, -hi)
    elif gate.kind is GateKind.HADAMARD:
        lo = np.take(arr, 0, axis=t)
        hi = np.take(arr, 1, axis=t)
        _assign(arr, t, 0, (lo + hi) * _SQRT_HALF)
        _assign(arr, t, 1, (lo - hi) * _SQRT_HALF)
    elif gate.kind is GateKind.CNOT:
        c = gate.control
        sel = [slice(None)] * width
        sel[c] = 1
        sub = arr[tuple(sel)]
        t_sub = t - 1 if t > c else t
        arr[tuple(sel)] = np.flip(sub, axis=t_sub).copy()
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unsupported gate kind {gate.kind!r}")
    return amps


def _assign(arr: np.ndarray, axis: int, index: int, values: np.ndarray) -> None:
    sel = [slice(None)] * arr.ndim
    sel[axis] = index
    arr[tuple(sel)] = values


def apply(state: PureState, op: Union[Gate, Circuit]) -> PureState:
    """Apply a gate or a whole circuit to a pure state.

    Unitary by construction; the norm is preserved to rounding.  Raises on
    any qubit index outside the state's register.
    """
    if isinstance(op, Gate):
        gates: Iterable[Gate] = (op,)
    elif isinstance(op, Circuit):
        if op.width != state.num_qubits:
            raise ValueError(
                f"circuit width {op.width} does not match register of {state.num_qubits}"
            )
        gates = op.gates
    else:
        raise TypeError("op must be a Gate or a Circuit")

    amps = state.amplitudes.copy()
    for g in gates:
        touched = (g.target,) if g.control is None else (g.control, g.target)
        check_qubits(touched, state.num_qubits)
        amps = _apply_gate(amps, g, state.num_qubits)
    return PureState(amps, state.num_qubits)


def premeasurement(system: int, apparatus: int, width: Optional[int] = None) -> Circuit:
    """One-bit record transfer: a c-not with the system as control.

    Acting on (a|0> + b|1>) (x) |0> it produces a|00> + b|11> exactly.
    """
    if system == apparatus:
        raise ValueError("system and apparatus must be distinct qubits")
    w = width if width is not None else max(system, apparatus) + 1
    return Circuit((cnot(system, apparatus),), w)


def decoherence_chain(
    apparatus: int, environment: Iterable[int], width: Optional[int] = None
) -> Circuit:
    """Monitoring chain: the apparatus controls a c-not onto each environment qubit.

    Acting on (a|00> + b|11>) (x) |0...0> it spreads the record into a
    two-branch state a|0...0> + b|1...1>.
    """
    env = tuple(int(q) for q in environment)
    if apparatus in env:
        raise ValueError("apparatus qubit cannot be part of the environment")
    if len(set(env)) != len(env):
        raise ValueError("environment qubits must be distinct")
    w = width if width is not None else max((apparatus, *env)) + 1
    return Circuit(tuple(cnot(apparatus, e) for e in env), w)


def noise_chain(
    environment: Iterable[int], apparatus: int, width: Optional[int] = None
) -> Circuit:
    """Noise chain: c-not directions reversed, the environment acts as control."""
    env = tuple(int(q) for q in environment)
    if apparatus in env:
        raise ValueError("apparatus qubit cannot be part of the environment")
    if len(set(env)) != len(env):
        raise ValueError("environment qubits must be distinct")
    w = width if width is not None else max((apparatus, *env)) + 1
    return Circuit(tuple(cnot(e, apparatus) for e in env), w)
