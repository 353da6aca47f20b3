import pytest

from planar_mis import instances
from planar_mis.embedding import embed
from planar_mis.hamiltonian import build_lattice_hamiltonian


@pytest.fixture(scope="session")
def k4():
    return instances.complete4()


@pytest.fixture(scope="session")
def q3():
    return instances.cube()


@pytest.fixture(scope="session")
def k4_embedding(k4):
    return embed(k4)


@pytest.fixture(scope="session")
def k4_lattice(k4, k4_embedding):
    return build_lattice_hamiltonian(k4_embedding, 9, k4)


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def acceptance(request):
    """Record one summary line per acceptance criterion; returns a recorder."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        request.config._acceptance_lines.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
