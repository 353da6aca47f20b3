"""State-vector simulation of the linear interpolation (1 - s) H_B + s H_P.

Basis convention: bit i of a basis index is qubit i (site i in row-major order),
and sigma_z |0> = +|0>, so bit 0 means S_i = +1. The lattice up-mask of basis
index x is therefore its bitwise complement.

H_B = + sum_i sigma_x; its ground state is |->^n with energy -n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, is_independent, mis_oracle
from .hamiltonian import LatticeHamiltonian, diagonal_energies
from .pulse import PulseSchedule, _flip_perm, _resource_diag, _z_values

__all__ = [
    "TransverseFieldHamiltonian",
    "AdiabaticRunConfig",
    "StateVector",
    "SimulationLimitError",
    "initial_ground_state",
    "problem_diagonal",
    "evolve_adiabatic",
    "success_probability",
    "success_breakdown",
    "sample_measurement",
    "sample_measurements",
    "gap_scan",
    "trotterized_pulse_run",
    "apply_schedule",
    "fidelity",
    "decode_bitstring",
    "MAX_EVOLVE_SITES",
    "MAX_GAP_SITES",
]

MAX_EVOLVE_SITES = 14
MAX_GAP_SITES = 12
MAX_PULSE_RUN_SITES = 10


class SimulationLimitError(ValueError):
    pass


@dataclass(frozen=True)
class TransverseFieldHamiltonian:
    n_sites: int

    @property
    def terms(self) -> list[tuple[int, int]]:
        return [(i, 1) for i in range(self.n_sites)]

    @classmethod
    def for_lattice(cls, h: LatticeHamiltonian) -> "TransverseFieldHamiltonian":
        return cls(h.n_sites)


@dataclass(frozen=True)
class AdiabaticRunConfig:
    T: float
    seed: int
    dt: float | None = None  # defaults to T / 1000

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("T must be positive")
        if self.dt is not None and not (0 < self.dt <= self.T):
            raise ValueError("need 0 < dt <= T")

    @property
    def step(self) -> float:
        return self.dt if self.dt is not None else self.T / 1000

    @property
    def n_steps(self) -> int:
        return max(1, math.ceil(self.T / self.step - 1e-9))


@dataclass
class StateVector:
    amplitudes: np.ndarray

    @property
    def n_sites(self) -> int:
        return int(self.amplitudes.size).bit_length() - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def to_bytes(self) -> bytes:
        """Little-endian (re, im) float64 pairs in basis order."""
        return np.asarray(self.amplitudes, dtype="<c16").tobytes()


def _check(n: int, limit: int) -> None:
    if n > limit:
        raise SimulationLimitError(f"{n} sites exceeds the simulator limit of {limit}")


def initial_ground_state(sites: int) -> StateVector:
    _check(sites, MAX_EVOLVE_SITES)
    idx = np.arange(1 << sites)
    parity = np.array([bin(x).count("1") & 1 for x in idx])
    amp = np.where(parity, -1.0, 1.0) / math.sqrt(1 << sites)
    return StateVector(amp.astype(complex))


def problem_diagonal(h: LatticeHamiltonian) -> np.ndarray:
    """Diagonal of H_P in the computational basis."""
    zz, z = h.terms()
    return diagonal_energies(h.n_sites, zz, z)[::-1].astype(float)


def _rotate_x(psi: np.ndarray, n: int, theta: float) -> np.ndarray:
    """Apply exp(-i theta sigma_x) on every qubit."""
    c, s = math.cos(theta), -1j * math.sin(theta)
    t = psi.reshape((2,) * n) if n else psi
    for ax in range(n):
        t = np.moveaxis(t, ax, 0)
        a, b = t[0].copy(), t[1].copy()
        t = np.stack((c * a + s * b, c * b + s * a))
        t = np.moveaxis(t, 0, ax)
    return t.reshape(-1)


def _finite(psi: np.ndarray) -> None:
    if not np.all(np.isfinite(psi)):
        raise FloatingPointError("non-finite amplitudes")


def evolve_adiabatic(
    hB: TransverseFieldHamiltonian,
    hP: LatticeHamiltonian | np.ndarray,
    cfg: AdiabaticRunConfig,
    initial: StateVector | None = None,
) -> StateVector:
    """Second-order splitting with the schedule evaluated at each step midpoint:
    exp(-i s H_P dt/2) exp(-i (1-s) H_B dt) exp(-i s H_P dt/2)."""
    n = hB.n_sites
    _check(n, MAX_EVOLVE_SITES)
    diag = hP if isinstance(hP, np.ndarray) else problem_diagonal(hP)
    if diag.size != 1 << n:
        raise ValueError("H_P dimension does not match H_B")
    psi = (initial or initial_ground_state(n)).amplitudes.copy()
    N = cfg.n_steps
    dt = cfg.T / N
    for k in range(N):
        s = (k + 0.5) / N
        half = np.exp(-0.5j * s * dt * diag)
        psi = half * psi
        psi = _rotate_x(psi, n, (1 - s) * dt)
        psi = half * psi
    _finite(psi)
    return StateVector(psi)


def _real_vertex_members(h: LatticeHamiltonian) -> tuple[list[int], list[int]]:
    vs = h.vertex_sites()
    verts = sorted(vs)
    return verts, [vs[k] for k in verts]


def success_breakdown(state: StateVector, g: Graph, h: LatticeHamiltonian) -> dict:
    """Probability that a measurement yields a maximum independent set on the real
    vertices, plus the part of it carried by fully aligned wires."""
    n = h.n_sites
    if state.amplitudes.size != 1 << n:
        raise ValueError("state dimension does not match the lattice sites")
    best = mis_oracle(g).cardinality
    verts, site_idx = _real_vertex_members(h)
    idx = np.arange(1 << n)
    # vertex k selected iff its spin is +1 iff its basis bit is 0
    sel = np.zeros(1 << n, dtype=np.int64)
    for k, i in zip(verts, site_idx):
        sel |= (((idx >> i) & 1) ^ 1) << k
    p = state.probabilities()
    good = np.zeros(1 << n, dtype=bool)
    for m in np.unique(sel):
        members = [k for k in range(g.n) if (m >> k) & 1]
        if len(members) == best and is_independent(g, members):
            good |= sel == m
    pos = {q: i for i, q in enumerate(h.sites)}
    aligned = np.ones(1 << n, dtype=bool)
    for w in h.wires:
        chain = [pos[q] for q in w.chain[:-1]]
        for a, b in zip(chain, chain[1:]):
            aligned &= ((idx >> a) & 1) == ((idx >> b) & 1)
    return {
        "success": float(p[good].sum()),
        "success_aligned": float(p[good & aligned].sum()),
        "aligned": float(p[aligned].sum()),
        "mis_size": best,
    }


def success_probability(state: StateVector, g: Graph, h: LatticeHamiltonian) -> float:
    return success_breakdown(state, g, h)["success"]


def _bitstring(x: int, n: int) -> str:
    return "".join(str((x >> i) & 1) for i in range(n))


def sample_measurements(state: StateVector, seed: int, shots: int) -> list[str]:
    p = state.probabilities()
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    n = state.n_sites
    return [_bitstring(int(x), n) for x in rng.choice(p.size, size=shots, p=p)]


def sample_measurement(state: StateVector, seed: int) -> str:
    """One basis state drawn from |amplitude|^2; character i is qubit i."""
    return sample_measurements(state, seed, 1)[0]


def _transverse_dense(n: int) -> np.ndarray:
    dim = 1 << n
    m = np.zeros((dim, dim))
    idx = np.arange(dim)
    for i in range(n):
        m[idx, idx ^ (1 << i)] += 1.0
    return m


def gap_scan(
    hB: TransverseFieldHamiltonian, hP: LatticeHamiltonian | np.ndarray, s_grid, distinct_levels: bool = False
) -> list[tuple[float, float]]:
    """(s, E1 - E0) from a dense eigensolve at every s.

    By default eigenvalues are counted with multiplicity, so a degenerate ground
    level gives 0. ``distinct_levels=True`` returns the spacing to the next
    distinct level instead, which is what the diagonal spectrum reports at s = 1.
    """
    n = hB.n_sites
    _check(n, MAX_GAP_SITES)
    diag = hP if isinstance(hP, np.ndarray) else problem_diagonal(hP)
    X = _transverse_dense(n)
    out = []
    for s in s_grid:
        H = (1 - s) * X
        H[np.diag_indices_from(H)] += s * diag
        ev = np.linalg.eigvalsh(H)
        if distinct_levels:
            above = ev[ev > ev[0] + 1e-9]
            gap = float(above[0] - ev[0]) if above.size else 0.0
        else:
            gap = float(ev[1] - ev[0]) if ev.size > 1 else 0.0
        out.append((float(s), 0.0 if gap < 1e-9 else gap))
    return out


def apply_schedule(psi: np.ndarray, schedule: PulseSchedule, sites, scale: float = 1.0) -> np.ndarray:
    """Run the literal pulse sequence (durations times ``scale``) on a state vector
    over the lattice ``sites``; resource bonds to other sites are omitted."""
    sites = list(sites)
    n = len(sites)
    pos = {p: i for i, p in enumerate(sites)}
    z = _z_values(n)
    hdiag = _resource_diag(sorted(sites), z) if sites == sorted(sites) else None
    if hdiag is None:
        raise ValueError("sites must be in row-major order")
    for sub in schedule.subroutines:
        phase = np.exp(-1j * hdiag * float(sub.step_duration) * scale)
        for st in sub.steps:
            perm = _flip_perm(n, [pos[p] for p in st.flip_mask if p in pos])
            psi = phase * psi[perm]
            psi = psi[perm]
    if schedule.local_fields:
        loc = np.zeros(1 << n)
        for p, w in schedule.local_fields.items():
            if p in pos:
                loc += w * z[pos[p]]
        psi = np.exp(-1j * loc * float(schedule.local_epoch_duration) * scale) * psi
    return psi


def trotterized_pulse_run(
    schedule: PulseSchedule,
    hB: TransverseFieldHamiltonian,
    cfg: AdiabaticRunConfig,
    h: LatticeHamiltonian,
    segments: int | None = None,
    exact_phases: bool = False,
) -> StateVector:
    """Interleave H_B evolution with the compiled pulse schedule.

    Each of ``segments`` segments of length D at midpoint s applies
    exp(-i (1-s) H_B D/2), the schedule scaled to implement H_P for time s D, and
    exp(-i (1-s) H_B D/2). ``exact_phases`` substitutes exp(-i s D H_P) for the
    pulses.
    """
    n = hB.n_sites
    _check(n, MAX_PULSE_RUN_SITES)
    N = segments or cfg.n_steps
    D = cfg.T / N
    psi = initial_ground_state(n).amplitudes.copy()
    diag = problem_diagonal(h)
    for k in range(N):
        s = (k + 0.5) / N
        psi = _rotate_x(psi, n, (1 - s) * D / 2)
        if exact_phases:
            psi = np.exp(-1j * s * D * diag) * psi
        else:
            psi = apply_schedule(psi, schedule, h.sites, s * D)
        psi = _rotate_x(psi, n, (1 - s) * D / 2)
    _finite(psi)
    return StateVector(psi)


def fidelity(a: StateVector, b: StateVector) -> float:
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def decode_bitstring(bits: str, g: Graph, h: LatticeHamiltonian) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(selected vertices, repaired independent set) read off a measured bitstring."""
    from .reduction import BitAssignment, repair_to_independent

    vs = h.vertex_sites()
    chosen = [k for k in sorted(vs) if bits[vs[k]] == "0"]
    fixed = repair_to_independent(g, BitAssignment.from_set(g.n, chosen))
    return tuple(chosen), fixed.members()
