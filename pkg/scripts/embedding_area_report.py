"""Grid size, site count and wall time of the orthogonal embedder per instance."""
import argparse
import time

from planar_mis import instances
from planar_mis.embedding import BudgetExceeded, embed, validate_embedding
from planar_mis.hamiltonian import build_lattice_hamiltonian


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=list(instances.SMALL_CUBIC_PLANAR))
    args = ap.parse_args()
    print(f"{'instance':<10s} {'n':>3s} {'grid':>6s} {'sites':>6s} {'ferro':>6s} {'valid':>6s} {'seconds':>8s}")
    for name in args.names:
        g = instances.NAMED[name]()
        t0 = time.perf_counter()
        try:
            emb = embed(g)
        except BudgetExceeded as exc:
            print(f"{name:<10s} {g.n:>3d} {'-':>6s} {'-':>6s} {'-':>6s} {'-':>6s} {time.perf_counter() - t0:8.2f}  {exc}")
            continue
        dt = time.perf_counter() - t0
        h = build_lattice_hamiltonian(emb, 9, g)
        ok = not validate_embedding(g, emb)
        grid = f"{emb.grid_rows}x{emb.grid_cols}"
        print(f"{name:<10s} {g.n:>3d} {grid:>6s} {h.n_sites:>6d} {h.ferromagnetic_bonds:>6d} {str(ok):>6s} {dt:8.2f}")


if __name__ == "__main__":
    main()
