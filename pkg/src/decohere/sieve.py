"""Predictability sieve: entropy trajectories, horizons, candidate ranking.

Evolution uses first-order operator splitting per grid interval: an exact
unitary step exp(-iH dt) from the spectral decomposition of the optional
self-Hamiltonian, followed by an exact dephasing step for the same dt.
With no self-Hamiltonian the channel semigroup is evaluated in closed form
at every grid time.

Two horizons are computed from a trajectory by trapezoid quadrature:

* the entropy horizon, the integral of (H_eq - H(t)) / (H_eq - H(0)),
  flagged as capped when the initial information H_eq - H(0) is degenerate
  or the integrand still exceeds 0.5 at the end of the window;
* the purity horizon, the integral of Tr rho(t)^2 - P_eq, flagged as
  cap-dominated when the integrand at the end of the window exceeds 1e-3.

P_eq is the register's equilibrium purity floor 2**-n (the all-outcomes-
equally-likely reference), which makes channel fixed points score a
cap-growing horizon instead of zero and keeps the ranking comparable
across candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .dephasing import DephasingChannel
from .states import (
    DensityMatrix,
    HERMITICITY_TOL,
    PureState,
    _entropy_bits,
    _readonly,
)

DEGENERATE_GAP = 1e-9
ENTROPY_CAP_THRESHOLD = 0.5
PURITY_CAP_THRESHOLD = 1e-3


def uniform_grid(t_end: float, steps: int) -> np.ndarray:
    """Evenly spaced sample times 0 .. t_end with ``steps`` intervals."""
    if steps < 1 or t_end <= 0:
        raise ValueError("grid needs at least one interval over positive time")
    return np.linspace(0.0, float(t_end), steps + 1)


@dataclass(frozen=True, eq=False)
class DynamicsSpec:
    """Open-system dynamics: channel, optional self-Hamiltonian, sampling grid."""

    channel: DephasingChannel
    time_grid: np.ndarray
    horizon_cap: float
    self_hamiltonian: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        grid = _readonly(np.asarray(self.time_grid, dtype=float).reshape(-1), dtype=float)
        if grid.size < 2 or grid[0] != 0.0:
            raise ValueError("time grid must start at 0 and contain at least two points")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("time grid must be strictly increasing")
        cap = float(self.horizon_cap)
        if cap < grid[-1] - 1e-12:
            raise ValueError("horizon cap must reach at least the last grid point")
        ham = self.self_hamiltonian
        if ham is not None:
            ham = _readonly(np.asarray(ham, dtype=complex))
            if ham.shape != (self.channel.dim, self.channel.dim):
                raise ValueError("self-Hamiltonian dimension does not match channel")
            if float(np.max(np.abs(ham - ham.conj().T))) > HERMITICITY_TOL:
                raise ValueError("self-Hamiltonian not Hermitian")
        object.__setattr__(self, "time_grid", grid)
        object.__setattr__(self, "horizon_cap", cap)
        object.__setattr__(self, "self_hamiltonian", ham)

    def recorded_times(self) -> np.ndarray:
        """Grid extended at its final spacing until the horizon cap."""
        grid = self.time_grid
        if self.horizon_cap <= grid[-1] + 1e-12:
            return grid.copy()
        dt = float(grid[-1] - grid[-2])
        extra = np.arange(grid[-1] + dt, self.horizon_cap + dt * 0.5, dt)
        extra = extra[extra < self.horizon_cap - 1e-12]
        return np.concatenate([grid, extra, [self.horizon_cap]])


@dataclass(frozen=True, eq=False)
class EntropyTrajectory:
    """Sampled entropy/purity record of one open-system evolution."""

    times: np.ndarray
    entropies: np.ndarray
    purities: np.ndarray
    equilibrium_entropy: float
    equilibrium_purity: float
    num_qubits: int

    def __post_init__(self) -> None:
        times = _readonly(np.asarray(self.times, dtype=float), dtype=float)
        ent = _readonly(np.asarray(self.entropies, dtype=float), dtype=float)
        pur = _readonly(np.asarray(self.purities, dtype=float), dtype=float)
        if not (times.size == ent.size == pur.size):
            raise ValueError("trajectory arrays must have equal length")
        if np.any(ent < -1e-9) or np.any(ent > self.num_qubits + 1e-9):
            raise ValueError("entropy values outside [0, num_qubits]")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "entropies", ent)
        object.__setattr__(self, "purities", pur)

    @property
    def final_entropy(self) -> float:
        return float(self.entropies[-1])


@dataclass(frozen=True)
class Horizon:
    """Quadrature value plus a flag marking cap-dominated (non-convergent) runs."""

    value: float
    capped: bool


def _entropies_from_stack(stack: np.ndarray) -> np.ndarray:
    eigs = np.linalg.eigvalsh(stack)
    low = float(eigs.min())
    if low < -1e-8:
        raise ValueError(f"evolved state lost positivity: eigenvalue {low!r}")
    safe = np.where(eigs > 1e-12, eigs, 1.0)
    return np.maximum(
        -np.sum(np.where(eigs > 1e-12, eigs * np.log2(safe), 0.0), axis=-1), 0.0
    )


def evolve_entropy(
    state: Union[PureState, DensityMatrix], dynamics: DynamicsSpec
) -> EntropyTrajectory:
    """Evolve a state and record entropy (bits) and purity on the time grid.

    The recording always spans [0, horizon_cap]; when the grid stops short
    it is continued at its final spacing.  The equilibrium entropy is taken
    from the decohered limit of the end state, or from the cap-time state
    itself when a self-Hamiltonian keeps rotating the register.
    """
    rho = state.to_density_matrix() if isinstance(state, PureState) else state
    if dynamics.channel.dim != rho.dim:
        raise ValueError("dynamics dimension does not match state")
    times = dynamics.recorded_times()
    w = dynamics.channel.basis
    t_d = dynamics.channel.t_d
    n = rho.num_qubits
    d = rho.dim
    off_diag = 1.0 - np.eye(d)

    if dynamics.self_hamiltonian is None:
        # Closed-form semigroup: damp pointer-frame off-diagonals per time.
        in_frame = w.conj().T @ rho.elements @ w
        factors = np.exp(-times[:, None, None] / t_d) * off_diag + np.eye(d)
        stack = in_frame[None, :, :] * factors
        eq_diag = in_frame.diagonal().real
    else:
        evals, vecs = np.linalg.eigh(dynamics.self_hamiltonian)
        stack = np.empty((times.size, d, d), dtype=complex)
        current = rho.elements.copy()
        stack[0] = w.conj().T @ current @ w
        step_cache: dict[float, np.ndarray] = {}
        for i in range(1, times.size):
            dt = float(times[i] - times[i - 1])
            u = step_cache.get(dt)
            if u is None:
                u = (vecs * np.exp(-1j * evals * dt)) @ vecs.conj().T
                step_cache[dt] = u
            current = u @ current @ u.conj().T
            in_frame = w.conj().T @ current @ w
            damp = math.exp(-dt / t_d) * off_diag + np.eye(d)
            in_frame = in_frame * damp
            current = w @ in_frame @ w.conj().T
            stack[i] = in_frame
        eq_diag = None

    entropies = _entropies_from_stack(stack)
    purities = np.sum(np.abs(stack) ** 2, axis=(1, 2))
    if eq_diag is not None:
        equilibrium_entropy = _entropy_bits(eq_diag)
    else:
        equilibrium_entropy = float(entropies[-1])
    return EntropyTrajectory(
        times=times,
        entropies=entropies,
        purities=purities,
        equilibrium_entropy=equilibrium_entropy,
        equilibrium_purity=2.0 ** (-n),
        num_qubits=n,
    )


def predictability_horizon(trajectory: EntropyTrajectory) -> Horizon:
    """Normalized entropy-relaxation time by trapezoid rule over the window.

    A degenerate information gap (H_eq within 1e-9 of H(0)) or an integrand
    above 0.5 at the end of the window returns a capped horizon whose value
    is the window length itself.
    """
    h_eq = trajectory.equilibrium_entropy
    h0 = float(trajectory.entropies[0])
    window = float(trajectory.times[-1])
    if h_eq <= h0 + DEGENERATE_GAP:
        return Horizon(window, True)
    integrand = (h_eq - trajectory.entropies) / (h_eq - h0)
    value = float(np.trapezoid(integrand, trajectory.times))
    return Horizon(value, bool(integrand[-1] > ENTROPY_CAP_THRESHOLD))


def purity_horizon(trajectory: EntropyTrajectory) -> Horizon:
    """Integrated excess purity above the equilibrium floor."""
    integrand = trajectory.purities - trajectory.equilibrium_purity
    value = float(np.trapezoid(integrand, trajectory.times))
    return Horizon(max(value, 0.0), bool(integrand[-1] > PURITY_CAP_THRESHOLD))


@dataclass(frozen=True)
class SieveReport:
    """Per-candidate sieve outcome."""

    label: str
    t_p: float
    t_p_capped: bool
    tprime_p: float
    tprime_capped: bool
    final_entropy: float
    theta: Optional[float] = None
    phi: Optional[float] = None


def bloch_state(theta: float, phi: float) -> PureState:
    """Single-qubit state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    return PureState.from_amplitudes(
        [math.cos(theta / 2.0), complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2.0)]
    )


def bloch_grid(theta_steps: int = 36, phi_steps: int = 36) -> list[tuple[float, float]]:
    """Plain product grid over (theta, phi); poles repeat across phi."""
    angles = []
    for i in range(theta_steps + 1):
        theta = math.pi * i / theta_steps
        for j in range(phi_steps):
            angles.append((theta, 2.0 * math.pi * j / phi_steps))
    return angles


def sieve_rank(
    candidates: Sequence[PureState],
    dynamics: DynamicsSpec,
    labels: Optional[Sequence[str]] = None,
    angles: Optional[Sequence[tuple[float, float]]] = None,
) -> list[SieveReport]:
    """Rank candidate initial states by descending purity horizon.

    Ties break by ascending final entropy, then by candidate position, so
    the order is deterministic and independent of evaluation order.
    """
    if not candidates:
        raise ValueError("need at least one candidate state")
    reports: list[tuple[float, float, int, SieveReport]] = []
    for idx, psi in enumerate(candidates):
        traj = evolve_entropy(psi, dynamics)
        t_p = predictability_horizon(traj)
        t_pp = purity_horizon(traj)
        label = labels[idx] if labels is not None else f"candidate-{idx}"
        theta, phi = (angles[idx] if angles is not None else (None, None))
        report = SieveReport(
            label=label,
            t_p=t_p.value,
            t_p_capped=t_p.capped,
            tprime_p=t_pp.value,
            tprime_capped=t_pp.capped,
            final_entropy=traj.final_entropy,
            theta=theta,
            phi=phi,
        )
        reports.append((-t_pp.value, traj.final_entropy, idx, report))
    reports.sort(key=lambda item: item[:3])
    return [item[3] for item in reports]
