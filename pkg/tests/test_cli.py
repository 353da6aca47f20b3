import json

import pytest

from planar_mis import instances
from planar_mis.cli import (
    EXIT_CAPACITY,
    EXIT_EMBED,
    EXIT_INVALID,
    EXIT_IO,
    EXIT_OK,
    PipelineConfig,
    main,
)
from planar_mis.graph import serialize_graph


@pytest.fixture
def graphs(tmp_path):
    out = {}
    for name in ("K4", "Q3", "K33", "P2", "prism6"):
        p = tmp_path / f"{name}.txt"
        p.write_text(serialize_graph(instances.NAMED[name]()))
        out[name] = str(p)
    bad = tmp_path / "bad.txt"
    bad.write_text("4 2\n0 1\n")
    out["bad"] = str(bad)
    return out


def test_oracle(graphs, capsys):
    assert main(["oracle", graphs["K4"]]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "1: {0}"
    assert main(["oracle", graphs["prism6"], "--oracle-limit", "8"]) == EXIT_CAPACITY


def test_validate(graphs, capsys):
    assert main(["validate", graphs["K4"]]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["is_cubic"] is True
    assert main(["validate", graphs["P2"]]) == EXIT_INVALID
    assert main(["validate", graphs["bad"]]) == EXIT_INVALID
    assert main(["validate", graphs["K4"] + ".missing"]) == EXIT_IO


def test_compile_outputs(graphs, tmp_path):
    out = tmp_path / "k4"
    assert main(["compile", graphs["K4"], "--out", str(out)]) == EXIT_OK
    names = {p.name for p in out.iterdir()}
    assert names == {"embedding.json", "hamiltonian.json", "schedule.json", "report.json", "manifest.json"}
    report = json.loads((out / "report.json").read_text())
    assert report["passed"] and report["correspondence"]["passed"]
    assert report["schedule"]["step_count"] == 16
    assert report["schedule"]["overhead_discrepancy"] == "1"
    assert main(["verify-schedule", str(out / "schedule.json"), str(out / "hamiltonian.json")]) == EXIT_OK


def test_compile_errors(graphs, tmp_path):
    assert main(["compile", graphs["K33"], "--out", str(tmp_path / "x")]) == EXIT_EMBED
    assert main(["compile", graphs["K4"], "--budget", "2x2", "--out", str(tmp_path / "y")]) == EXIT_EMBED
    assert main(["compile", graphs["P2"], "--out", str(tmp_path / "z")]) == EXIT_INVALID
    assert main(["solve", graphs["Q3"], "--out", str(tmp_path / "w")]) == EXIT_CAPACITY


def test_bad_flags(graphs):
    with pytest.raises(SystemExit):
        main(["compile", graphs["K4"], "--budget", "3y"])
    assert main(["compile", graphs["K4"], "--c", "0"]) == EXIT_INVALID
    with pytest.raises(ValueError):
        PipelineConfig("x", shots=-1)


def test_solve_short(graphs, tmp_path):
    out = tmp_path / "s"
    args = ["solve", graphs["K4"], "--T", "5", "--shots", "20", "--out", str(out), "--dump-amplitudes"]
    assert main(args) == EXIT_OK
    rep = json.loads((out / "solve_report.json").read_text())
    assert rep["config"]["steps"] == 100
    assert len(rep["samples"]) == 20
    assert rep["gap_scan"][-1]["gap_distinct_levels"] == 4.0
    assert (out / "amplitudes.bin").stat().st_size == 16 * 2**9
