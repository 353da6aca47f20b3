"""Success probability of the embedded-K4 lattice against total time T."""
import argparse

from planar_mis import instances
from planar_mis.dynamics import AdiabaticRunConfig, TransverseFieldHamiltonian, evolve_adiabatic, success_breakdown
from planar_mis.embedding import embed
from planar_mis.hamiltonian import build_lattice_hamiltonian


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c", type=int, default=9)
    ap.add_argument("--T", type=float, nargs="+", default=[5, 10, 20, 40, 80, 160, 320])
    ap.add_argument("--dt", type=float, default=0.05)
    args = ap.parse_args()

    g = instances.complete4()
    h = build_lattice_hamiltonian(embed(g), args.c, g)
    hB = TransverseFieldHamiltonian.for_lattice(h)
    print(f"K4 lattice, {h.n_sites} sites, c={args.c}, dt={args.dt}")
    print(f"{'T':>8s} {'P(MIS)':>10s} {'P(MIS, wires aligned)':>22s} {'P(aligned)':>11s}")
    for T in args.T:
        br = success_breakdown(evolve_adiabatic(hB, h, AdiabaticRunConfig(T, 0, args.dt)), g, h)
        print(f"{T:8g} {br['success']:10.5f} {br['success_aligned']:22.5f} {br['aligned']:11.5f}")


if __name__ == "__main__":
    main()
