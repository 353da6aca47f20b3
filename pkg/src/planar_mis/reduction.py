"""MIS on cubic graphs as the ground energy of a spin glass in a uniform field.

Assignments are bit masks over vertex indices: bit k of a bit mask is X_k, and
bit k of a spin mask is set iff S_k = +1. With S_k = 2 X_k - 1 the two masks
coincide, so ``spins_from_bits`` only changes the interpretation.

For cubic graphs,  E(S) = sum_k S_k + sum_(k,l) S_k S_l = n/2 - 4 L(X),  where
L(X) = |X| - (number of edges inside X).
"""
from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph

__all__ = [
    "BitAssignment",
    "SpinAssignment",
    "ProblemHamiltonian",
    "AssignmentError",
    "NotCubicError",
    "objective_L",
    "penalty",
    "repair_to_independent",
    "spins_from_bits",
    "bits_from_spins",
    "energy_E",
    "build_HP",
    "mis_from_ground_energy",
    "min_energy_exhaustive",
]


class AssignmentError(ValueError):
    pass


class NotCubicError(ValueError):
    pass


@dataclass(frozen=True)
class BitAssignment:
    n: int
    mask: int

    @classmethod
    def from_list(cls, bits) -> "BitAssignment":
        bits = list(bits)
        if any(b not in (0, 1) for b in bits):
            raise AssignmentError("bits must be 0 or 1")
        return cls(len(bits), sum(b << i for i, b in enumerate(bits)))

    @classmethod
    def from_set(cls, n: int, members) -> "BitAssignment":
        return cls(n, sum(1 << k for k in set(members)))

    def __getitem__(self, k: int) -> int:
        return (self.mask >> k) & 1

    def as_list(self) -> list[int]:
        return [self[k] for k in range(self.n)]

    def members(self) -> tuple[int, ...]:
        return tuple(k for k in range(self.n) if self[k])

    @property
    def cardinality(self) -> int:
        return bin(self.mask).count("1")


@dataclass(frozen=True)
class SpinAssignment:
    n: int
    up_mask: int

    @classmethod
    def from_list(cls, spins) -> "SpinAssignment":
        spins = list(spins)
        if any(s not in (-1, 1) for s in spins):
            raise AssignmentError("spins must be -1 or +1")
        return cls(len(spins), sum(1 << i for i, s in enumerate(spins) if s == 1))

    def __getitem__(self, k: int) -> int:
        return 1 if (self.up_mask >> k) & 1 else -1

    def as_list(self) -> list[int]:
        return [self[k] for k in range(self.n)]


@dataclass(frozen=True)
class ProblemHamiltonian:
    """H_P = sum_edges Z_k Z_l + sum_vertices Z_k, all weights +1."""

    n: int
    zz_terms: tuple[tuple[int, int, int], ...]
    z_terms: tuple[tuple[int, int], ...]

    def energy(self, s: SpinAssignment) -> int:
        return sum(w * s[k] * s[l] for k, l, w in self.zz_terms) + sum(w * s[k] for k, w in self.z_terms)

    def to_dict(self) -> dict:
        return {
            "grid": None,
            "c": None,
            "sites": [{"site": k, "role": "vertex", "vertex": k, "z_field": w} for k, w in self.z_terms],
            "couplings": [{"sites": [k, l], "weight": w} for k, l, w in self.zz_terms],
        }


def _check(g: Graph, n: int) -> None:
    if n != g.n:
        raise AssignmentError(f"assignment covers {n} vertices, graph has {g.n}")


def penalty(g: Graph, x: BitAssignment) -> int:
    _check(g, x.n)
    return sum(1 for u, v in g.edges if x[u] and x[v])


def objective_L(g: Graph, x: BitAssignment) -> int:
    _check(g, x.n)
    return x.cardinality - penalty(g, x)


def repair_to_independent(g: Graph, x: BitAssignment) -> BitAssignment:
    """Drop endpoints of violated edges until the selection is independent.

    For each violated edge (lowest in edge order) the endpoint with more selected
    neighbours is removed, ties going to the smaller index. Each removal lowers the
    cardinality by one and the penalty by at least one, so L never decreases and
    the final cardinality is at least L(x).
    """
    _check(g, x.n)
    mask = x.mask
    nbr = g.neighbor_masks()
    while True:
        bad = next(((u, v) for u, v in g.edges if (mask >> u) & 1 and (mask >> v) & 1), None)
        if bad is None:
            return BitAssignment(x.n, mask)
        u, v = bad
        du = bin(nbr[u] & mask).count("1")
        dv = bin(nbr[v] & mask).count("1")
        drop = v if dv > du else u
        mask &= ~(1 << drop)


def spins_from_bits(x: BitAssignment) -> SpinAssignment:
    return SpinAssignment(x.n, x.mask)


def bits_from_spins(s: SpinAssignment) -> BitAssignment:
    return BitAssignment(s.n, s.up_mask)


def energy_E(g: Graph, s: SpinAssignment) -> int:
    _check(g, s.n)
    return sum(s[k] for k in range(g.n)) + sum(s[k] * s[l] for k, l in g.edges)


def _require_cubic(g: Graph) -> None:
    bad = [v for v in range(g.n) if g.degree(v) != 3]
    if bad or g.n == 0:
        raise NotCubicError(f"graph is not cubic (vertices with degree != 3: {bad})")


def build_HP(g: Graph, require_cubic: bool = True) -> ProblemHamiltonian:
    """Problem Hamiltonian of the graph.

    ``require_cubic=False`` builds the same operator for max-degree-3 graphs used in
    gadget studies; the n/2 - 4v energy correspondence then no longer holds.
    """
    if require_cubic:
        _require_cubic(g)
    return ProblemHamiltonian(
        g.n,
        tuple((k, l, 1) for k, l in g.edges),
        tuple((k, 1) for k in range(g.n)),
    )


def mis_from_ground_energy(g: Graph, e_min: int) -> int:
    _require_cubic(g)
    num = g.n - 2 * e_min  # (n/2 - e_min)/4 == (n - 2 e_min)/8
    if num % 8:
        raise ValueError(f"ground energy {e_min} inconsistent with a cubic graph on {g.n} vertices")
    return num // 8


def min_energy_exhaustive(g: Graph) -> tuple[int, int]:
    """(minimum energy_E, lowest spin mask attaining it) over all 2^n assignments."""
    import numpy as np

    n = g.n
    idx = np.arange(1 << n, dtype=np.int64)
    spins = [((idx >> k) & 1) * 2 - 1 for k in range(n)]
    e = np.zeros(1 << n, dtype=np.int64)
    for k in range(n):
        e += spins[k]
    for k, l in g.edges:
        e += spins[k] * spins[l]
    best = int(np.argmin(e))
    return int(e[best]), best
