"""Nearest-neighbour lattice Hamiltonian built from an orthogonal embedding, plus
exact diagonal spectra.

Every edge (k, l), k < l, becomes a wire Gamma_k, v_1, ..., v_m, Gamma_l. The bonds
Gamma_k-v_1 and v_i-v_(i+1) are ferromagnetic (-c), the last bond v_m-Gamma_l is
antiferromagnetic (+1). Real vertices carry a +1 field, dummies none.

Configurations are up-masks over the row-major site list: bit i set means
S_i = +1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .embedding import GridPoint, OrthogonalEmbedding, validate_embedding
from .graph import Graph
from .reduction import ProblemHamiltonian

__all__ = [
    "LatticeHamiltonian",
    "LatticeWire",
    "SpinConfiguration",
    "Level",
    "Spectrum",
    "SpectrumLimitError",
    "build_lattice_hamiltonian",
    "energy_of",
    "exhaustive_spectrum",
    "diagonal_energies",
    "check_correspondence",
    "CorrespondenceReport",
    "wire_mismatch_count",
    "gap_upper_bound_check",
    "GapReport",
    "wire_gadget_separation",
    "random_lattice_hamiltonian",
    "hamiltonian_to_json",
    "hamiltonian_from_json",
    "DEFAULT_C",
    "DEFAULT_SITE_LIMIT",
    "DEFAULT_WITNESS_CAP",
]

DEFAULT_C = 9
DEFAULT_SITE_LIMIT = 26
DEFAULT_WITNESS_CAP = 64
_CHUNK_BITS = 20


class SpectrumLimitError(ValueError):
    pass


@dataclass(frozen=True)
class LatticeWire:
    edge: tuple[int, int]
    chain: tuple[GridPoint, ...]  # Gamma_k, v_1..v_m, Gamma_l

    @property
    def dummy_count(self) -> int:
        return len(self.chain) - 2


@dataclass(frozen=True)
class LatticeHamiltonian:
    grid_rows: int
    grid_cols: int
    sites: tuple[GridPoint, ...]
    roles: tuple[int | None, ...]  # graph vertex at each site, None for dummies
    zz_couplings: dict = field(hash=False)  # (p, q) with p < q -> int
    z_fields: dict = field(hash=False)  # p -> int
    c: int = DEFAULT_C
    wires: tuple[LatticeWire, ...] = ()

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.sites)}

    def vertex_sites(self) -> dict[int, int]:
        """graph vertex -> site index"""
        return {k: i for i, k in enumerate(self.roles) if k is not None}

    @property
    def ferromagnetic_bonds(self) -> int:
        return sum(1 for w in self.zz_couplings.values() if w < 0)

    def terms(self):
        idx = self.index
        zz = [(idx[p], idx[q], w) for (p, q), w in self.zz_couplings.items()]
        z = [(idx[p], w) for p, w in self.z_fields.items() if w]
        return zz, z

    def wire(self, edge) -> LatticeWire:
        for w in self.wires:
            if w.edge == tuple(edge):
                return w
        raise KeyError(f"no wire for edge {edge}")


@dataclass(frozen=True)
class SpinConfiguration:
    n_sites: int
    up_mask: int

    @classmethod
    def from_spins(cls, spins) -> "SpinConfiguration":
        spins = list(spins)
        if any(s not in (-1, 1) for s in spins):
            raise ValueError("spins must be -1 or +1")
        return cls(len(spins), sum(1 << i for i, s in enumerate(spins) if s == 1))

    def __getitem__(self, i: int) -> int:
        return 1 if (self.up_mask >> i) & 1 else -1

    def as_list(self) -> list[int]:
        return [self[i] for i in range(self.n_sites)]


@dataclass(frozen=True)
class Level:
    energy: int
    degeneracy: int
    witnesses: tuple[int, ...]  # up-masks, ascending


@dataclass(frozen=True)
class Spectrum:
    n_sites: int
    levels: tuple[Level, ...]

    @property
    def ground_energy(self) -> int:
        return self.levels[0].energy

    @property
    def gap(self) -> int | None:
        return self.levels[1].energy - self.levels[0].energy if len(self.levels) > 1 else None


def build_lattice_hamiltonian(emb: OrthogonalEmbedding, c: int = DEFAULT_C, g: Graph | None = None) -> LatticeHamiltonian:
    if c < 1 or int(c) != c:
        raise ValueError("coupling strength c must be a positive integer")
    if g is not None:
        bad = validate_embedding(g, emb)
        if bad:
            raise ValueError(f"invalid embedding: {bad[0]}")
    sites = tuple(emb.used_points())
    where = {p: k for k, p in enumerate(emb.vertex_at)}
    roles = tuple(where.get(p) for p in sites)
    zz: dict = {}
    wires = []
    for (k, l), path in sorted(emb.edge_paths.items()):
        path = tuple(tuple(q) for q in path)
        wires.append(LatticeWire((k, l), path))
        for i, (a, b) in enumerate(zip(path, path[1:])):
            w = 1 if i == len(path) - 2 else -c
            key = (min(a, b), max(a, b))
            if key in zz:
                raise ValueError(f"bond {key} used by two wires")
            zz[key] = w
    z = {p: (1 if where.get(p) is not None else 0) for p in sites}
    return LatticeHamiltonian(
        emb.grid_rows, emb.grid_cols, sites, roles, dict(sorted(zz.items())), z, int(c), tuple(wires)
    )


def energy_of(h: LatticeHamiltonian, s: SpinConfiguration) -> int:
    if s.n_sites != h.n_sites:
        raise ValueError(f"configuration covers {s.n_sites} sites, Hamiltonian has {h.n_sites}")
    zz, z = h.terms()
    return sum(w * s[i] * s[j] for i, j, w in zz) + sum(w * s[i] for i, w in z)


def diagonal_energies(n: int, zz, z, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Energies of up-masks start..stop-1 for integer terms ``zz=(i, j, w)``, ``z=(i, w)``."""
    stop = (1 << n) if stop is None else stop
    idx = np.arange(start, stop, dtype=np.int64)
    spin = {}

    def s(i):
        if i not in spin:
            spin[i] = (((idx >> i) & 1) * 2 - 1).astype(np.int64)
        return spin[i]

    e = np.zeros(stop - start, dtype=np.int64)
    for i, j, w in zz:
        e += w * s(i) * s(j)
    for i, w in z:
        e += w * s(i)
    return e


def _spectrum(n: int, zz, z, k_levels: int, cap: int | None, limit: int) -> Spectrum:
    if n > limit:
        raise SpectrumLimitError(f"{n} sites exceeds the exhaustive limit of {limit}")
    total = 1 << n
    chunk = 1 << min(n, _CHUNK_BITS)
    levels: dict[int, list] = {}  # energy -> [count, witnesses]
    for start in range(0, total, chunk):
        e = diagonal_energies(n, zz, z, start, start + chunk)
        vals, counts = np.unique(e, return_counts=True)
        for v, cnt in zip(vals[:k_levels].tolist(), counts[:k_levels].tolist()):
            entry = levels.setdefault(v, [0, []])
            entry[0] += cnt
            room = None if cap is None else cap - len(entry[1])
            if room is None or room > 0:
                hits = np.flatnonzero(e == v)
                if room is not None:
                    hits = hits[:room]
                entry[1].extend((hits + start).tolist())
        for v in sorted(levels)[k_levels:]:
            del levels[v]
    out = tuple(Level(v, levels[v][0], tuple(levels[v][1])) for v in sorted(levels))
    return Spectrum(n, out)


def exhaustive_spectrum(
    h: LatticeHamiltonian,
    k_levels: int = 2,
    witness_cap: int | None = DEFAULT_WITNESS_CAP,
    site_limit: int = DEFAULT_SITE_LIMIT,
) -> Spectrum:
    zz, z = h.terms()
    return _spectrum(h.n_sites, zz, z, k_levels, witness_cap, site_limit)


def problem_spectrum(hp: ProblemHamiltonian, k_levels: int = 2, witness_cap: int | None = None, limit: int = DEFAULT_SITE_LIMIT) -> Spectrum:
    return _spectrum(hp.n, list(hp.zz_terms), list(hp.z_terms), k_levels, witness_cap, limit)


def wire_mismatch_count(h: LatticeHamiltonian, s: SpinConfiguration, wire) -> int:
    """Anti-aligned pairs along the ferromagnetic part Gamma_k, v_1..v_m of a wire."""
    if isinstance(wire, LatticeWire):
        if wire not in h.wires:
            raise KeyError(f"wire {wire.edge} does not belong to this Hamiltonian")
    else:
        wire = h.wire(wire)
    idx = h.index
    chain = [idx[p] for p in wire.chain[:-1]]
    return sum(1 for a, b in zip(chain, chain[1:]) if s[a] != s[b])


def _restrict(h: LatticeHamiltonian, up_mask: int) -> int:
    out = 0
    for k, i in h.vertex_sites().items():
        if (up_mask >> i) & 1:
            out |= 1 << k
    return out


@dataclass
class CorrespondenceReport:
    c: int
    ferromagnetic_bonds: int
    problem_energies: tuple[int, ...]
    lattice_energies: tuple[int, ...]
    restriction_ok: bool  # (a)
    bijection_ok: bool  # (b)
    wires_aligned: bool  # (c)
    energy_shift_ok: bool  # (d)
    excited_ok: bool | None  # (e); None when c < 9 or no excited level
    details: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        base = self.restriction_ok and self.bijection_ok and self.wires_aligned and self.energy_shift_ok
        return base and self.excited_ok is not False

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "ferromagnetic_bonds": self.ferromagnetic_bonds,
            "problem_levels": list(self.problem_energies),
            "lattice_levels": list(self.lattice_energies),
            "restriction": self.restriction_ok,
            "bijection": self.bijection_ok,
            "wires_aligned": self.wires_aligned,
            "energy_shift": self.energy_shift_ok,
            "first_excited": self.excited_ok,
            "passed": self.passed,
            "details": self.details,
        }


def _level_matches(h, hp_level: Level, lat_level: Level, details: list, tag: str):
    hp_set = set(hp_level.witnesses)
    images = [_restrict(h, w) for w in lat_level.witnesses]
    restriction = all(x in hp_set for x in images)
    bijection = (
        restriction
        and len(set(images)) == len(images)
        and set(images) == hp_set
        and lat_level.degeneracy == hp_level.degeneracy
    )
    aligned = True
    for w in lat_level.witnesses:
        s = SpinConfiguration(h.n_sites, w)
        bad = [wire.edge for wire in h.wires if wire_mismatch_count(h, s, wire)]
        if bad:
            aligned = False
            details.append(f"{tag}: state {w:#x} misaligned on wires {bad}")
            break
    if not restriction:
        details.append(f"{tag}: some lattice states restrict outside the problem level")
    elif not bijection:
        details.append(
            f"{tag}: degeneracy {lat_level.degeneracy} on lattice vs {hp_level.degeneracy} in problem"
        )
    return restriction, bijection, aligned


def check_correspondence(
    g: Graph, hp: ProblemHamiltonian, h: LatticeHamiltonian, site_limit: int = DEFAULT_SITE_LIMIT, witness_cap: int = 1 << 16
) -> CorrespondenceReport:
    """Compare the two lowest levels of the problem and lattice Hamiltonians exhaustively."""
    if hp.n != g.n:
        raise ValueError("problem Hamiltonian does not match the graph")
    ps = problem_spectrum(hp, 2, None)
    ls = exhaustive_spectrum(h, 2, witness_cap, site_limit)
    F = h.ferromagnetic_bonds
    details: list = []
    a, b, cc = _level_matches(h, ps.levels[0], ls.levels[0], details, "ground")
    shift = ls.levels[0].energy == ps.levels[0].energy - h.c * F
    if not shift:
        details.append(f"ground: lattice {ls.levels[0].energy} != {ps.levels[0].energy} - {h.c}*{F}")
    excited = None
    if len(ps.levels) > 1 and len(ls.levels) > 1:
        ea, eb, ec = _level_matches(h, ps.levels[1], ls.levels[1], details, "first-excited")
        eshift = ls.levels[1].energy == ps.levels[1].energy - h.c * F
        result = ea and eb and ec and eshift
        if h.c >= 9 or result:
            excited = result
        else:
            details.append("first-excited correspondence not claimed below c=9")
    return CorrespondenceReport(
        h.c,
        F,
        tuple(l.energy for l in ps.levels),
        tuple(l.energy for l in ls.levels),
        a,
        b,
        cc,
        shift,
        excited,
        details,
    )


@dataclass
class GapReport:
    ground_energy: int
    first_excited: int | None
    gap: int | None
    max_single_flip: int
    ground_states: int

    @property
    def passed(self) -> bool:
        return (self.gap is None or self.gap <= 8) and self.max_single_flip <= 8

    def to_dict(self) -> dict:
        return {
            "ground_energy": self.ground_energy,
            "first_excited": self.first_excited,
            "gap": self.gap,
            "max_single_flip": self.max_single_flip,
            "ground_states": self.ground_states,
            "passed": self.passed,
        }


def gap_upper_bound_check(g: Graph, hp: ProblemHamiltonian) -> GapReport:
    """Gap of H_P by enumeration, and the largest |dE| of a single spin flip out of any ground state."""
    spec = problem_spectrum(hp, 2, None)
    zz = list(hp.zz_terms)
    z = list(hp.z_terms)
    worst = 0
    for w in spec.levels[0].witnesses:
        base = int(diagonal_energies(hp.n, zz, z, w, w + 1)[0])
        for k in range(hp.n):
            f = w ^ (1 << k)
            e = int(diagonal_energies(hp.n, zz, z, f, f + 1)[0])
            worst = max(worst, abs(e - base))
    lv = spec.levels
    return GapReport(
        lv[0].energy,
        lv[1].energy if len(lv) > 1 else None,
        spec.gap,
        worst,
        lv[0].degeneracy,
    )


def wire_gadget_separation(m: int, c: int) -> tuple[int, int]:
    """(min energy with >= 1 mismatch, max energy with none) of an isolated wire.

    The wire is Gamma_k, v_1..v_m, Gamma_l with only its own bonds; both are taken
    over every configuration of the m + 2 spins.
    """
    n = m + 2
    zz = [(i, i + 1, -c) for i in range(m)] + [(m, m + 1, 1)]
    e = diagonal_energies(n, zz, [])
    idx = np.arange(1 << n, dtype=np.int64)
    mism = np.zeros(1 << n, dtype=np.int64)
    for i in range(m):
        mism += ((idx >> i) & 1) != ((idx >> (i + 1)) & 1)
    bad = e[mism > 0]
    good = e[mism == 0]
    return (int(bad.min()) if bad.size else None, int(good.max()))


def hamiltonian_to_json(h: LatticeHamiltonian) -> str:
    doc = {
        "grid": [h.grid_rows, h.grid_cols],
        "c": h.c,
        "sites": [
            {"site": list(p), "role": "dummy" if k is None else "vertex", "vertex": k, "z_field": h.z_fields[p]}
            for p, k in zip(h.sites, h.roles)
        ],
        "couplings": [{"sites": [list(p), list(q)], "weight": w} for (p, q), w in sorted(h.zz_couplings.items())],
        "wires": [{"edge": list(w.edge), "chain": [list(p) for p in w.chain]} for w in h.wires],
    }
    lines = [f" {json.dumps(k)}: {json.dumps(v, separators=(',', ':'))}" for k, v in doc.items()]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def hamiltonian_from_json(text: str) -> LatticeHamiltonian:
    doc = json.loads(text)
    sites = tuple(tuple(s["site"]) for s in doc["sites"])
    roles = tuple(s["vertex"] for s in doc["sites"])
    z = {tuple(s["site"]): s["z_field"] for s in doc["sites"]}
    zz = {}
    for cpl in doc["couplings"]:
        p, q = (tuple(x) for x in cpl["sites"])
        zz[(min(p, q), max(p, q))] = cpl["weight"]
    wires = tuple(LatticeWire(tuple(w["edge"]), tuple(tuple(p) for p in w["chain"])) for w in doc.get("wires", []))
    rows, cols = doc["grid"]
    return LatticeHamiltonian(rows, cols, sites, roles, dict(sorted(zz.items())), z, doc["c"], wires)


def random_lattice_hamiltonian(rows: int, cols: int, c: int, rng, density: float = 0.5) -> LatticeHamiltonian:
    """Full-grid Hamiltonian with each nearest-neighbour bond present with probability
    ``density`` and weight +1 or -c, and random 0/1 local fields. Used to stress the
    pulse compiler on couplings no embedding would produce."""
    sites = tuple((r, q) for r in range(rows) for q in range(cols))
    zz = {}
    for p in sites:
        for d in ((0, 1), (1, 0)):
            q = (p[0] + d[0], p[1] + d[1])
            if q[0] < rows and q[1] < cols and rng.random() < density:
                zz[(p, q)] = 1 if rng.random() < 0.5 else -c
    z = {p: int(rng.integers(0, 2)) for p in sites}
    return LatticeHamiltonian(rows, cols, sites, (None,) * len(sites), dict(sorted(zz.items())), z, int(c), ())
