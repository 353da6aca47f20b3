"""Command-line pipeline: validate, oracle, compile, solve, verify-schedule.

Exit codes: 0 ok, 1 validation or verification failure, 2 I/O, 3 embedding,
4 capacity.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import dynamics as dyn
from .embedding import BudgetExceeded, NonPlanar, embed, embedding_to_json, validate_embedding
from .graph import DEFAULT_ORACLE_LIMIT, GraphFormatError, OracleLimitError, read_graph, validate_cubic_planar, mis_oracle
from .hamiltonian import (
    DEFAULT_C,
    DEFAULT_SITE_LIMIT,
    SpectrumLimitError,
    build_lattice_hamiltonian,
    check_correspondence,
    gap_upper_bound_check,
    hamiltonian_from_json,
    hamiltonian_to_json,
)
from .pulse import compile_schedule, schedule_from_json, schedule_to_json, verify_schedule
from .reduction import build_HP

log = logging.getLogger("planar_mis")

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_EMBED, EXIT_CAPACITY = 0, 1, 2, 3, 4


@dataclass
class PipelineConfig:
    input: str
    c: int = DEFAULT_C
    budget: tuple[int, int] | None = None
    oracle_limit: int = DEFAULT_ORACLE_LIMIT
    T: float = 320.0
    dt: float | None = 0.05
    seed: int = 1
    shots: int = 200
    out: str | None = None
    verbose: int = 0

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("--c must be a positive integer")
        if self.oracle_limit < 1:
            raise ValueError("--oracle-limit must be positive")
        if self.shots < 0:
            raise ValueError("--shots must be non-negative")


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _load_graph(path: str):
    try:
        return read_graph(path)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None
    except GraphFormatError as exc:
        raise _Fail(EXIT_INVALID, f"{path}: {exc}") from None


def _out_dir(cfg: PipelineConfig) -> Path:
    out = Path(cfg.out) if cfg.out else Path("run") / Path(cfg.input).stem
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot create {out}: {exc}") from None
    return out


def _write(out: Path, files: dict[str, str]) -> None:
    manifest = {}
    for name, text in files.items():
        data = text.encode("utf-8")
        (out / name).write_bytes(data)
        manifest[name] = hashlib.sha256(data).hexdigest()
    (out / "manifest.json").write_text(_dump({"artifacts": manifest}), encoding="utf-8")


def _validated(cfg: PipelineConfig):
    g = _load_graph(cfg.input)
    rep = validate_cubic_planar(g)
    if not rep.ok:
        raise _Fail(EXIT_INVALID, "instance is not a cubic planar candidate: " + "; ".join(m for _, m in rep.violations))
    return g


def _embedded(g, cfg: PipelineConfig):
    try:
        return embed(g, cfg.budget)
    except NonPlanar as exc:
        raise _Fail(EXIT_EMBED, f"NonPlanar: {exc}") from None
    except BudgetExceeded as exc:
        raise _Fail(EXIT_EMBED, f"BudgetExceeded: {exc}") from None


def cmd_validate(cfg: PipelineConfig) -> int:
    g = _load_graph(cfg.input)
    rep = validate_cubic_planar(g)
    text = _dump(rep.to_dict())
    sys.stdout.write(text)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_oracle(cfg: PipelineConfig) -> int:
    g = _load_graph(cfg.input)
    try:
        w = mis_oracle(g, cfg.oracle_limit)
    except OracleLimitError as exc:
        raise _Fail(EXIT_CAPACITY, str(exc)) from None
    print(w)
    return EXIT_OK


def compile_artifacts(cfg: PipelineConfig) -> tuple[dict, bool]:
    g = _validated(cfg)
    emb = _embedded(g, cfg)
    violations = validate_embedding(g, emb)
    h = build_lattice_hamiltonian(emb, cfg.c, g)
    sched = compile_schedule(h)
    sched_rep = verify_schedule(sched, h)
    hp = build_HP(g)
    report = {
        "instance": {"n": g.n, "m": g.m},
        "c": cfg.c,
        "embedding": {
            "grid": [emb.grid_rows, emb.grid_cols],
            "used_sites": h.n_sites,
            "dummies": h.n_sites - g.n,
            "strategy": emb.strategy,
            "violations": [str(v) for v in violations],
            "within_n_by_n_budget": emb.grid_rows <= g.n and emb.grid_cols <= g.n,
            "within_half_n_square": max(emb.grid_rows, emb.grid_cols) <= g.n // 2,
        },
        "schedule": sched_rep.to_dict(),
    }
    ok = not violations and sched_rep.passed
    if g.n <= cfg.oracle_limit:
        gap = gap_upper_bound_check(g, hp)
        report["problem_gap"] = gap.to_dict()
        ok = ok and gap.passed
    else:
        report["problem_gap"] = "skipped: instance above oracle limit"
    if h.n_sites <= DEFAULT_SITE_LIMIT:
        corr = check_correspondence(g, hp, h)
        report["correspondence"] = corr.to_dict()
        ok = ok and corr.passed
    else:
        report["correspondence"] = f"skipped: {h.n_sites} sites above exhaustive limit {DEFAULT_SITE_LIMIT}"
    report["passed"] = ok
    files = {
        "embedding.json": embedding_to_json(emb),
        "hamiltonian.json": hamiltonian_to_json(h),
        "schedule.json": schedule_to_json(sched),
        "report.json": _dump(report),
    }
    return files, ok


def cmd_compile(cfg: PipelineConfig) -> int:
    files, ok = compile_artifacts(cfg)
    out = _out_dir(cfg)
    _write(out, files)
    log.info("wrote %s", ", ".join(str(out / f) for f in files))
    print(f"compile: {'ok' if ok else 'FAILED'} -> {out}")
    return EXIT_OK if ok else EXIT_INVALID


def solve_report(cfg: PipelineConfig) -> tuple[dict, "dyn.StateVector"]:
    g = _validated(cfg)
    if g.n > cfg.oracle_limit:
        raise _Fail(EXIT_CAPACITY, f"{g.n} vertices exceeds oracle limit {cfg.oracle_limit}")
    emb = _embedded(g, cfg)
    h = build_lattice_hamiltonian(emb, cfg.c, g)
    if h.n_sites > dyn.MAX_EVOLVE_SITES:
        raise _Fail(EXIT_CAPACITY, f"{h.n_sites} lattice sites exceeds simulator limit {dyn.MAX_EVOLVE_SITES}")
    run = dyn.AdiabaticRunConfig(cfg.T, cfg.seed, cfg.dt)
    hB = dyn.TransverseFieldHamiltonian.for_lattice(h)
    state = dyn.evolve_adiabatic(hB, h, run)
    br = dyn.success_breakdown(state, g, h)
    shots = dyn.sample_measurements(state, cfg.seed, cfg.shots)
    best = mis_oracle(g, cfg.oracle_limit).cardinality
    decoded = [dyn.decode_bitstring(b, g, h) for b in shots]
    raw_hits = sum(1 for chosen, fixed in decoded if chosen == fixed and len(chosen) == best)
    repaired_hits = sum(1 for _, fixed in decoded if len(fixed) == best)
    recovered = max((len(f) for _, f in decoded), default=0)
    gap_table = None
    if h.n_sites <= dyn.MAX_GAP_SITES:
        grid = [i / 20 for i in range(21)]
        raw = dyn.gap_scan(hB, h, grid)
        distinct = dyn.gap_scan(hB, h, grid, distinct_levels=True)
        gap_table = [{"s": s, "gap": a, "gap_distinct_levels": b} for (s, a), (_, b) in zip(raw, distinct)]
    report = {
        "config": {"input": cfg.input, "c": cfg.c, "T": cfg.T, "dt": run.step, "steps": run.n_steps, "seed": cfg.seed, "shots": cfg.shots},
        "sites": h.n_sites,
        "norm": round(state.norm, 12),
        "mis_oracle": best,
        "success_probability": br["success"],
        "success_probability_aligned_wires": br["success_aligned"],
        "wire_alignment_probability": br["aligned"],
        "shots_independent_and_maximum": raw_hits,
        "shots_maximum_after_repair": repaired_hits,
        "recovered_mis_size": recovered,
        "recovered_matches_oracle": recovered == best,
        "samples": shots,
        "gap_scan": gap_table,
    }
    return report, state


def cmd_solve(cfg: PipelineConfig, dump_amplitudes: bool = False) -> int:
    report, state = solve_report(cfg)
    out = _out_dir(cfg)
    files = {"solve_report.json": _dump(report)}
    _write(out, files)
    if dump_amplitudes:
        (out / "amplitudes.bin").write_bytes(state.to_bytes())
    print(
        f"solve: success probability {report['success_probability']:.6f}, "
        f"recovered MIS size {report['recovered_mis_size']} (oracle {report['mis_oracle']}) -> {out}"
    )
    return EXIT_OK


def cmd_verify_schedule(schedule_path: str, hamiltonian_path: str) -> int:
    try:
        s = schedule_from_json(Path(schedule_path).read_text(encoding="utf-8"))
        h = hamiltonian_from_json(Path(hamiltonian_path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise _Fail(EXIT_IO, str(exc)) from None
    rep = verify_schedule(s, h)
    sys.stdout.write(_dump(rep.to_dict()))
    return EXIT_OK if rep.passed else EXIT_INVALID


def _budget(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad budget {text!r}; use N or RxC") from None
    if len(nums) == 1:
        nums = nums * 2
    if len(nums) != 2 or min(nums) < 1:
        raise argparse.ArgumentTypeError(f"bad budget {text!r}; use N or RxC")
    return nums[0], nums[1]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="planar-mis", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, solve=False):
        sp.add_argument("graph")
        sp.add_argument("--c", type=int, default=DEFAULT_C)
        sp.add_argument("--budget", type=_budget, default=None, help="grid limit N or RxC (default n x n)")
        sp.add_argument("--oracle-limit", type=int, default=DEFAULT_ORACLE_LIMIT)
        sp.add_argument("--out", default=None)
        if solve:
            sp.add_argument("--T", type=float, default=320.0)
            sp.add_argument("--dt", type=float, default=0.05)
            sp.add_argument("--seed", type=int, default=1)
            sp.add_argument("--shots", type=int, default=200)
            sp.add_argument("--dump-amplitudes", action="store_true")

    v = sub.add_parser("validate", help="check the instance is cubic and a planar candidate")
    v.add_argument("graph")
    v.add_argument("--out", default=None)
    o = sub.add_parser("oracle", help="exact maximum independent set")
    o.add_argument("graph")
    o.add_argument("--oracle-limit", type=int, default=DEFAULT_ORACLE_LIMIT)
    common(sub.add_parser("compile", help="embedding, lattice Hamiltonian, pulse schedule, checks"))
    common(sub.add_parser("solve", help="adiabatic simulation of the lattice Hamiltonian"), solve=True)
    vs = sub.add_parser("verify-schedule", help="check a schedule file against a Hamiltonian file")
    vs.add_argument("schedule")
    vs.add_argument("hamiltonian")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        if args.command == "verify-schedule":
            return cmd_verify_schedule(args.schedule, args.hamiltonian)
        kw = {k: getattr(args, k) for k in ("c", "budget", "oracle_limit", "out", "T", "dt", "seed", "shots") if hasattr(args, k)}
        cfg = PipelineConfig(input=args.graph, verbose=args.verbose, **kw)
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "oracle":
            return cmd_oracle(cfg)
        if args.command == "compile":
            return cmd_compile(cfg)
        if args.command == "solve":
            return cmd_solve(cfg, args.dump_amplitudes)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (SpectrumLimitError, dyn.SimulationLimitError, OracleLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
