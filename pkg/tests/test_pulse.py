from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from planar_mis.hamiltonian import LatticeHamiltonian, random_lattice_hamiltonian
from planar_mis.pulse import (
    ScheduleError,
    assign_columns,
    average_hamiltonian,
    compile_schedule,
    effective_propagator,
    hadamard_column,
    lattice_bonds,
    propagator_fidelity,
    pulse_level_evolve,
    schedule_from_json,
    schedule_to_json,
    verify_schedule,
    with_mid_step_flip,
)


def _row(cols, kept, c=3, ferro=False):
    """1 x cols lattice whose kept horizontal bonds are listed by left endpoint."""
    sites = tuple((0, j) for j in range(cols))
    w = -c if ferro else 1
    zz = {((0, j), (0, j + 1)): w for j in kept}
    return LatticeHamiltonian(1, cols, sites, (None,) * cols, zz, {p: 0 for p in sites}, c, ())


def test_hadamard_columns_orthogonal():
    cols = [hadamard_column(a, b) for a in (0, 1) for b in (0, 1)]
    for x, y in combinations(cols, 2):
        assert x.dot(y) == 0
    for x in cols:
        assert x.dot(x) == 4 and x.dot(-x) == -4
    assert hadamard_column(1, 1).entries == (1, -1, -1, 1)


def test_assign_columns_row_example():
    ca = assign_columns(_row(4, [1]), 1)
    assert [ca.labels[(0, j)][1] for j in range(4)] == [0, 1, 1, 0]
    assert all(ca.labels[(0, j)][0] == 0 for j in range(4))


def test_ferro_signs_alternate():
    ca = assign_columns(_row(4, [0, 1, 2], ferro=True), 3)
    assert [ca.signs[(0, j)] for j in range(4)] == [1, -1, 1, -1]


def test_k4_schedule(k4_lattice):
    s = compile_schedule(k4_lattice)
    rep = verify_schedule(s, k4_lattice)
    assert rep.passed and rep.step_count == 16
    assert rep.coupling_duration == Fraction(20)
    assert rep.claimed_overhead == 19 and rep.overhead_discrepancy == 1


@pytest.mark.parametrize("c", [1, 2, 3, 9, 15])
def test_overhead_is_2c_plus_2(c):
    h = random_lattice_hamiltonian(3, 3, c, np.random.default_rng(c))
    rep = verify_schedule(compile_schedule(h), h)
    assert rep.passed
    assert rep.measured_overhead == 2 * c + 2


def test_rejects_uncompilable():
    h = _row(3, [0])
    bad = LatticeHamiltonian(1, 3, h.sites, h.roles, {((0, 0), (0, 2)): 1}, h.z_fields, 3, ())
    with pytest.raises(ScheduleError):
        compile_schedule(bad)
    bad = LatticeHamiltonian(1, 3, h.sites, h.roles, {((0, 0), (0, 1)): 2}, h.z_fields, 3, ())
    with pytest.raises(ScheduleError):
        compile_schedule(bad)


def test_mid_step_flip_detected(k4_lattice):
    s = compile_schedule(k4_lattice)
    broken = with_mid_step_flip(s, 0, 1, (0, 0))
    with pytest.raises(ScheduleError):
        average_hamiltonian(broken)
    U = pulse_level_evolve(broken)
    V = effective_propagator(average_hamiltonian(s), k4_lattice.sites)
    assert 1 - propagator_fidelity(U, V) > 0.1


def test_out_of_grid_mask_rejected(k4_lattice):
    s = compile_schedule(k4_lattice)
    with pytest.raises(ScheduleError):
        average_hamiltonian(s, (2, 2))


@pytest.mark.parametrize("shape,seed", [((1, 2), 0), ((1, 2), 1), ((2, 2), 2), ((2, 2), 3), ((1, 4), 4)])
def test_pulse_level_exact(shape, seed):
    h = random_lattice_hamiltonian(*shape, 3, np.random.default_rng(seed), density=0.8)
    s = compile_schedule(h)
    U = pulse_level_evolve(s)
    V = effective_propagator(average_hamiltonian(s), h.sites)
    assert 1 - propagator_fidelity(U, V) < 1e-10


def test_pulse_level_k4(k4_lattice):
    s = compile_schedule(k4_lattice)
    U = pulse_level_evolve(s, substeps=3)
    V = effective_propagator(average_hamiltonian(s), k4_lattice.sites)
    assert 1 - propagator_fidelity(U, V) < 1e-10


def test_json_roundtrip(k4_lattice):
    s = compile_schedule(k4_lattice)
    text = schedule_to_json(s)
    back = schedule_from_json(text)
    assert schedule_to_json(back) == text
    assert verify_schedule(back, k4_lattice).passed


def test_scaled_preserves_pattern(k4_lattice):
    s = compile_schedule(k4_lattice)
    half = s.scaled(Fraction(1, 2))
    eff = average_hamiltonian(half)
    full = average_hamiltonian(s)
    assert all(eff.bonds[b] * 2 == full.bonds[b] for b in full.bonds)


@given(st.integers(1, 8), st.integers(1, 8), st.integers(1, 12), st.floats(0, 1), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_random_lattices_compile_exactly(rows, cols, c, density, seed):
    h = random_lattice_hamiltonian(rows, cols, c, np.random.default_rng(seed), density)
    s = compile_schedule(h)
    rep = verify_schedule(s, h)
    assert rep.passed, rep.bond_mismatches[:3]
    eff = average_hamiltonian(s)
    assert set(eff.bonds) == set(lattice_bonds(rows, cols))
