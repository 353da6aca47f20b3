"""Scan the ferromagnetic strength c of the wire gadget.

For isolated wires of m dummies it prints whether every misaligned wire lies
strictly above every aligned one, then runs the full ground / first-excited
correspondence on embedded K4.
"""
import argparse

from planar_mis import instances
from planar_mis.embedding import embed
from planar_mis.hamiltonian import build_lattice_hamiltonian, check_correspondence, wire_gadget_separation
from planar_mis.reduction import build_HP


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c-max", type=int, default=10)
    ap.add_argument("--m-max", type=int, default=6)
    args = ap.parse_args()

    print("isolated wire: min(misaligned) - max(aligned)")
    print("c   " + " ".join(f"m={m:<3d}" for m in range(1, args.m_max + 1)))
    for c in range(1, args.c_max + 1):
        row = []
        for m in range(1, args.m_max + 1):
            lo, hi = wire_gadget_separation(m, c)
            row.append(f"{lo - hi:<5d}")
        print(f"{c:<3d} " + " ".join(row))

    g = instances.complete4()
    emb = embed(g)
    hp = build_HP(g)
    print("\nembedded K4 (9 sites, 5 ferromagnetic bonds)")
    print("c   ground  excited  lattice levels")
    for c in range(1, args.c_max + 1):
        rep = check_correspondence(g, hp, build_lattice_hamiltonian(emb, c, g))
        ground = rep.restriction_ok and rep.bijection_ok and rep.wires_aligned and rep.energy_shift_ok
        print(f"{c:<3d} {str(ground):<7s} {str(rep.excited_ok):<8s} {list(rep.lattice_energies)}")


if __name__ == "__main__":
    main()
