import pytest

from nanophonon.lamb_modes import enumerate_modes
from nanophonon.materials import Particle, get_preset


@pytest.fixture
def fig1():
    return get_preset("ErYSO-fig1")


@pytest.fixture
def fig2():
    return get_preset("ErYSO-fig2")


@pytest.fixture(scope="session")
def particle_12nm():
    return Particle(get_preset("ErYSO-fig1"), 12e-9)


@pytest.fixture(scope="session")
def modes_12nm(particle_12nm):
    return enumerate_modes(particle_12nm, 3.2e12)


ACCEPTANCE_LINES = []


@pytest.fixture
def report(capsys):
    """Print one PASS/FAIL line for an acceptance criterion, then assert it."""

    def emit(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} | {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print(f"\n{line}")
        assert ok, line

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
