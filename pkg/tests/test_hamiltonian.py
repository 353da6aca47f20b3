from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from planar_mis.embedding import embed
from planar_mis.hamiltonian import (
    DEFAULT_C,
    SpectrumLimitError,
    SpinConfiguration,
    build_lattice_hamiltonian,
    check_correspondence,
    diagonal_energies,
    energy_of,
    exhaustive_spectrum,
    gap_upper_bound_check,
    hamiltonian_from_json,
    hamiltonian_to_json,
    random_lattice_hamiltonian,
    wire_gadget_separation,
    wire_mismatch_count,
)
from planar_mis.reduction import build_HP


def test_default_c():
    assert DEFAULT_C == 9


def test_k4_lattice_structure(k4_lattice):
    h = k4_lattice
    assert h.n_sites == 9 and h.ferromagnetic_bonds == 5
    assert len(h.wires) == 6
    assert sum(1 for w in h.zz_couplings.values() if w == 1) == 6
    assert sorted(h.vertex_sites()) == [0, 1, 2, 3]
    assert sum(h.z_fields.values()) == 4


def test_k4_spectrum_frozen(k4_lattice):
    sp = exhaustive_spectrum(k4_lattice)
    # ground and first excited of H_P (-2, 2) shifted by -c F = -45
    assert [lv.energy for lv in sp.levels] == [-47, -43]
    assert [lv.degeneracy for lv in sp.levels] == [10, 5]


@pytest.mark.parametrize("c,ground_ok,excited", [(1, False, None), (2, True, None), (3, True, None), (9, True, True)])
def test_correspondence_threshold(k4, k4_embedding, c, ground_ok, excited):
    h = build_lattice_hamiltonian(k4_embedding, c, k4)
    rep = check_correspondence(k4, build_HP(k4), h)
    assert (rep.restriction_ok and rep.bijection_ok and rep.wires_aligned) == ground_ok
    if excited is not None:
        assert rep.excited_ok is excited
    if ground_ok:
        assert rep.energy_shift_ok
        assert rep.lattice_energies[0] == rep.problem_energies[0] - c * h.ferromagnetic_bonds


def test_gadget_separation():
    for m in range(1, 5):
        lo, hi = wire_gadget_separation(m, 1)
        assert lo <= hi
        for c in (2, 3, 9):
            lo, hi = wire_gadget_separation(m, c)
            assert lo > hi


def test_gap_check(k4, q3):
    rep = gap_upper_bound_check(k4, build_HP(k4))
    assert (rep.gap, rep.max_single_flip, rep.ground_states) == (4, 4, 10)
    assert rep.passed
    rep = gap_upper_bound_check(q3, build_HP(q3))
    assert rep.gap == 4 and rep.max_single_flip <= 8


def test_wire_mismatch(k4_lattice):
    h = k4_lattice
    all_up = SpinConfiguration(h.n_sites, (1 << h.n_sites) - 1)
    assert all(wire_mismatch_count(h, all_up, w) == 0 for w in h.wires)
    w = h.wire((2, 3))
    i = h.index[w.chain[1]]
    flipped = SpinConfiguration(h.n_sites, all_up.up_mask ^ (1 << i))
    assert wire_mismatch_count(h, flipped, (2, 3)) == 2


def test_spectrum_limit(k4_lattice):
    with pytest.raises(SpectrumLimitError):
        exhaustive_spectrum(k4_lattice, site_limit=8)


def test_json_roundtrip(k4_lattice):
    text = hamiltonian_to_json(k4_lattice)
    back = hamiltonian_from_json(text)
    assert back.zz_couplings == k4_lattice.zz_couplings
    assert back.z_fields == k4_lattice.z_fields
    assert back.c == 9 and back.sites == k4_lattice.sites
    assert hamiltonian_to_json(back) == text


def test_invalid_c(k4, k4_embedding):
    with pytest.raises(ValueError):
        build_lattice_hamiltonian(k4_embedding, 0, k4)


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 9), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_diagonal_matches_pointwise_energy(rows, cols, c, seed):
    h = random_lattice_hamiltonian(rows, cols, c, np.random.default_rng(seed))
    zz, z = h.terms()
    diag = diagonal_energies(h.n_sites, zz, z)
    rng = np.random.default_rng(seed + 1)
    for mask in rng.integers(0, 1 << h.n_sites, size=8):
        assert diag[mask] == energy_of(h, SpinConfiguration(h.n_sites, int(mask)))


@given(st.integers(0, 2**9 - 1))
@settings(max_examples=60, deadline=None)
def test_global_flip_of_zz_part(mask):
    # without fields the bond energy is invariant under a global spin flip
    from planar_mis import instances

    g = instances.complete4()
    h = build_lattice_hamiltonian(embed(g), 9, g)
    h0 = replace(h, z_fields={p: 0 for p in h.sites})
    full = (1 << h.n_sites) - 1
    a = energy_of(h0, SpinConfiguration(h.n_sites, mask))
    b = energy_of(h0, SpinConfiguration(h.n_sites, mask ^ full))
    assert a == b
